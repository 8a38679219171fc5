#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace rlauction::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Dense LP in the form
///   maximize objective . x
///   subject to rows (<=, >=, =) and 0 <= x_j <= upper_j.
struct Model {
    std::vector<double> objective;
    std::vector<double> upper;  // same length as objective; lp::infinity allowed

    struct Row {
        std::vector<double> coeffs;  // dense, length num_vars
        Sense sense = Sense::LessEqual;
        double rhs = 0.0;
    };
    std::vector<Row> rows;

    std::size_t num_vars() const { return objective.size(); }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, NumericalError };

const char* to_string(Status s);

struct Solution {
    Status status = Status::NumericalError;
    double objective = 0.0;
    std::vector<double> x;
    int iterations = 0;
    std::string message;
};

struct SolveOptions {
    double reduced_cost_tol = 1e-9;
    double pivot_tol = 1e-9;        // minimum magnitude for a ratio-test candidate
    double pivot_fail_tol = 1e-11;  // below this the chosen pivot is a numeric failure
    int max_iterations = 200000;
    int degenerate_before_bland = 50;  // consecutive zero-step pivots before Bland's rule
};

/// Two-phase dense primal simplex with bounded variables.  Dantzig pricing
/// with an automatic switch to Bland's rule after a run of degenerate pivots,
/// which guarantees termination.  The final basic solution is re-solved
/// against the basis matrix by LU with partial pivoting to shed accumulated
/// pivot roundoff.
Solution solve(const Model& model, const SolveOptions& options = {});

}  // namespace rlauction::lp
