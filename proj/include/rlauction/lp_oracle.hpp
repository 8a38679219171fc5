#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rlauction/direct.hpp"
#include "rlauction/instance.hpp"
#include "rlauction/lp.hpp"

namespace rlauction {

/// Ground-truth formulation of the revenue maximization problem over full
/// y0/y1 tables, one variable per (buyer, payment, value profile, outcome).
/// Row metadata ties every constraint row back to its meaning.
struct LPModel {
    struct RowRef {
        enum Kind { OutcomeSum, SingleItem, Bic, Ir } kind = OutcomeSum;
        int buyer = 0;
        std::size_t k = 0;        // value index (Bic truth / Ir)
        std::size_t k_alt = 0;    // Bic misreport
        std::size_t profile = 0;  // OutcomeSum / SingleItem
        std::string describe() const;
    };

    lp::Model model;
    std::vector<RowRef> row_refs;
    int buyers = 1;
    std::size_t num_values = 0;
    std::size_t num_payments = 0;
    std::size_t num_profiles = 0;

    std::size_t lose_var(int buyer, std::size_t payment, std::size_t profile) const {
        return (static_cast<std::size_t>(buyer) * num_payments + payment) * num_profiles +
               profile;
    }
    std::size_t win_var(int buyer, std::size_t payment, std::size_t profile) const {
        return static_cast<std::size_t>(buyers) * num_payments * num_profiles +
               lose_var(buyer, payment, profile);
    }
};

/// Guard: 2*n*M*K^n variables must not exceed this.
inline constexpr std::size_t max_oracle_variables = 100000;

/// Builds the primal LP (objective, BIC and IR rows from interim
/// aggregation, per-profile outcome-sum equalities and single-item rows).
/// Throws std::invalid_argument naming the computed size when the variable
/// guard is exceeded.
LPModel build_primal_lp(const Instance& inst);

lp::Solution solve_lp(const LPModel& model, const lp::SolveOptions& options = {});

struct OracleResult {
    double revenue = 0.0;
    DirectMechanism mechanism;
};

/// build + solve + reconstruct; the returned mechanism is checked against
/// check_bic / check_ir / check_feasibility before returning.  An infeasible
/// LP is impossible (the null mechanism is always feasible) and raises
/// std::logic_error.
OracleResult optimal_revenue_oracle(const Instance& inst);

}  // namespace rlauction
