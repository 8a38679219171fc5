#include "rlauction/lp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rlauction/verify.hpp"

namespace rlauction {

std::string LPModel::RowRef::describe() const {
    std::ostringstream out;
    switch (kind) {
        case OutcomeSum:
            out << "outcome sum, buyer " << buyer + 1 << ", profile " << profile;
            break;
        case SingleItem:
            out << "single item, profile " << profile;
            break;
        case Bic:
            out << "BIC, buyer " << buyer + 1 << ", truth " << k + 1 << " vs report "
                << k_alt + 1;
            break;
        case Ir:
            out << "IR, buyer " << buyer + 1 << ", value " << k + 1;
            break;
    }
    return out.str();
}

LPModel build_primal_lp(const Instance& inst) {
    const std::size_t K = inst.num_values();
    const std::size_t M = inst.num_payments();
    const int n = inst.buyers();
    ProfileSpace space(K, n);
    const std::size_t P = space.count();
    const std::size_t num_vars = 2 * static_cast<std::size_t>(n) * M * P;
    if (num_vars > max_oracle_variables) {
        std::ostringstream msg;
        msg << "build_primal_lp: 2*n*M*K^n = " << num_vars << " exceeds the guard of "
            << max_oracle_variables;
        throw std::invalid_argument(msg.str());
    }

    LPModel lp;
    lp.buyers = n;
    lp.num_values = K;
    lp.num_payments = M;
    lp.num_profiles = P;
    lp.model.objective.assign(num_vars, 0.0);
    lp.model.upper.assign(num_vars, 1.0);

    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    std::vector<double> profile_pmf(P);
    for (std::size_t p = 0; p < P; ++p) {
        space.decode(p, digits);
        profile_pmf[p] = space.pmf(digits, inst.pmf());
    }

    // Objective: expected total payments.
    const auto& z = inst.payments();
    for (int i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            for (std::size_t p = 0; p < P; ++p) {
                const double coeff = profile_pmf[p] * z[j];
                lp.model.objective[lp.lose_var(i, j, p)] = coeff;
                lp.model.objective[lp.win_var(i, j, p)] = coeff;
            }
        }
    }

    // Outcome distributions are proper per buyer and profile.
    for (int i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < P; ++p) {
            lp::Model::Row row;
            row.coeffs.assign(num_vars, 0.0);
            for (std::size_t j = 0; j < M; ++j) {
                row.coeffs[lp.lose_var(i, j, p)] = 1.0;
                row.coeffs[lp.win_var(i, j, p)] = 1.0;
            }
            row.sense = lp::Sense::Equal;
            row.rhs = 1.0;
            lp.model.rows.push_back(std::move(row));
            lp.row_refs.push_back({LPModel::RowRef::OutcomeSum, i, 0, 0, p});
        }
    }

    // At most one item per profile.
    for (std::size_t p = 0; p < P; ++p) {
        lp::Model::Row row;
        row.coeffs.assign(num_vars, 0.0);
        for (int i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < M; ++j) row.coeffs[lp.win_var(i, j, p)] = 1.0;
        }
        row.sense = lp::Sense::LessEqual;
        row.rhs = 1.0;
        lp.model.rows.push_back(std::move(row));
        lp.row_refs.push_back({LPModel::RowRef::SingleItem, 0, 0, 0, p});
    }

    // Interim utility of buyer i with true value k when the table entries of
    // report k2 are used, as coefficients over the y variables.
    const auto add_interim_utility = [&](std::vector<double>& coeffs, int i,
                                         std::size_t k_true, std::size_t k_report,
                                         double sign) {
        const auto& u = inst.utility();
        const double v = inst.values()[k_true];
        for (std::size_t p = 0; p < P; ++p) {
            space.decode(p, digits);
            if (digits[static_cast<std::size_t>(i)] != k_report) continue;
            const double f_others = profile_pmf[p] / inst.pmf()[k_report];
            for (std::size_t j = 0; j < M; ++j) {
                coeffs[lp.win_var(i, j, p)] += sign * f_others * eval_utility(u, v - z[j]);
                coeffs[lp.lose_var(i, j, p)] += sign * f_others * eval_utility(u, -z[j]);
            }
        }
    };

    for (int i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t k2 = 0; k2 < K; ++k2) {
                lp::Model::Row row;
                row.coeffs.assign(num_vars, 0.0);
                add_interim_utility(row.coeffs, i, k, k, +1.0);
                add_interim_utility(row.coeffs, i, k, k2, -1.0);
                row.sense = lp::Sense::GreaterEqual;
                row.rhs = 0.0;
                lp.model.rows.push_back(std::move(row));
                lp.row_refs.push_back({LPModel::RowRef::Bic, i, k, k2, 0});
            }
            lp::Model::Row row;
            row.coeffs.assign(num_vars, 0.0);
            add_interim_utility(row.coeffs, i, k, k, +1.0);
            row.sense = lp::Sense::GreaterEqual;
            row.rhs = 0.0;
            lp.model.rows.push_back(std::move(row));
            lp.row_refs.push_back({LPModel::RowRef::Ir, i, k, 0, 0});
        }
    }
    return lp;
}

lp::Solution solve_lp(const LPModel& model, const lp::SolveOptions& options) {
    return lp::solve(model.model, options);
}

OracleResult optimal_revenue_oracle(const Instance& inst) {
    const LPModel lp = build_primal_lp(inst);
    const lp::Solution solution = solve_lp(lp);
    if (solution.status == lp::Status::Infeasible) {
        throw std::logic_error(
            "optimal_revenue_oracle: LP reported infeasible, but the null mechanism is "
            "always feasible — " +
            solution.message);
    }
    if (solution.status != lp::Status::Optimal) {
        throw std::runtime_error(std::string("optimal_revenue_oracle: solver status ") +
                                 lp::to_string(solution.status) + " " + solution.message);
    }

    OracleResult result;
    result.revenue = solution.objective;
    result.mechanism = DirectMechanism::zeros(inst);
    const std::size_t P = result.mechanism.profile_count();
    for (int i = 0; i < inst.buyers(); ++i) {
        for (std::size_t j = 0; j < inst.num_payments(); ++j) {
            for (std::size_t p = 0; p < P; ++p) {
                result.mechanism.lose(i, j, p) =
                    std::clamp(solution.x[lp.lose_var(i, j, p)], 0.0, 1.0);
                result.mechanism.win(i, j, p) =
                    std::clamp(solution.x[lp.win_var(i, j, p)], 0.0, 1.0);
            }
        }
    }

    const VerificationReport report = verify_direct(result.mechanism, inst, 1e-7);
    if (!report.all_ok()) {
        std::ostringstream msg;
        msg << "optimal_revenue_oracle: reconstructed mechanism fails verification "
            << "(worst violation " << report.worst_violation;
        if (!report.issues.empty()) msg << ", first: " << report.issues.front().what;
        msg << ")";
        throw std::logic_error(msg.str());
    }
    return result;
}

}  // namespace rlauction
