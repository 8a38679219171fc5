#include "rlauction/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace rlauction::lp {

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration_limit";
        case Status::NumericalError: return "numerical_error";
    }
    return "?";
}

namespace {

enum class VarState : std::uint8_t { AtLower, AtUpper, Basic };

// Dense LU with partial pivoting; solve() works in place.
class LuFactors {
  public:
    bool factor(std::vector<double> matrix, std::size_t n) {
        n_ = n;
        lu_ = std::move(matrix);
        perm_.resize(n);
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            for (std::size_t r = col + 1; r < n; ++r) {
                if (std::abs(lu_[r * n + col]) > std::abs(lu_[pivot * n + col])) pivot = r;
            }
            if (std::abs(lu_[pivot * n + col]) < 1e-13) return false;
            if (pivot != col) {
                for (std::size_t c = 0; c < n; ++c) {
                    std::swap(lu_[pivot * n + c], lu_[col * n + c]);
                }
                std::swap(perm_[pivot], perm_[col]);
            }
            const double inv = 1.0 / lu_[col * n + col];
            for (std::size_t r = col + 1; r < n; ++r) {
                const double factor = lu_[r * n + col] * inv;
                lu_[r * n + col] = factor;
                if (factor == 0.0) continue;
                for (std::size_t c = col + 1; c < n; ++c) {
                    lu_[r * n + c] -= factor * lu_[col * n + c];
                }
            }
        }
        return true;
    }

    void solve(std::vector<double>& x) const {
        std::vector<double> permuted(n_);
        for (std::size_t i = 0; i < n_; ++i) permuted[i] = x[perm_[i]];
        for (std::size_t r = 1; r < n_; ++r) {
            double v = permuted[r];
            for (std::size_t c = 0; c < r; ++c) v -= lu_[r * n_ + c] * permuted[c];
            permuted[r] = v;
        }
        for (std::size_t r = n_; r-- > 0;) {
            double v = permuted[r];
            for (std::size_t c = r + 1; c < n_; ++c) v -= lu_[r * n_ + c] * permuted[c];
            permuted[r] = v / lu_[r * n_ + r];
        }
        x = std::move(permuted);
    }

  private:
    std::size_t n_ = 0;
    std::vector<double> lu_;
    std::vector<std::size_t> perm_;
};

// Two-phase primal simplex on the bounded standard form
//   maximize cost . x,  A x = b,  0 <= x_j <= up_j,
// with slack/surplus columns for inequality rows and artificial columns only
// where no natural starting basic variable exists.  The dense tableau T holds
// B^{-1} A; it is refactorized from scratch at a fixed pivot cadence so that
// long degenerate runs cannot let roundoff accumulate.
class Tableau {
  public:
    Tableau(const Model& model, const SolveOptions& opt) : opt_(opt) {
        const std::size_t n = model.num_vars();
        m_ = model.rows.size();

        std::size_t extras = 0, artificials = 0;
        for (const auto& row : model.rows) {
            const bool flip = row.rhs < 0.0;
            const Sense sense = !flip ? row.sense
                                : row.sense == Sense::LessEqual ? Sense::GreaterEqual
                                : row.sense == Sense::GreaterEqual ? Sense::LessEqual
                                                                   : Sense::Equal;
            const double rhs = std::abs(row.rhs);
            if (sense != Sense::Equal) ++extras;
            // Zero-rhs >= rows start on their own surplus; others need help.
            if (sense == Sense::Equal || (sense == Sense::GreaterEqual && rhs > 0.0)) {
                ++artificials;
            }
        }
        total_ = n + extras + artificials;
        n_structural_ = n;

        a_.assign(m_ * total_, 0.0);
        b_.assign(m_, 0.0);
        up_ = model.upper;
        up_.resize(total_, infinity);
        basis_.assign(m_, 0);
        state_.assign(total_, VarState::AtLower);
        negate_row_.assign(m_, false);

        std::size_t next_extra = n;
        std::size_t next_artificial = n + extras;
        artificial_start_ = next_artificial;
        for (std::size_t r = 0; r < m_; ++r) {
            const auto& row = model.rows[r];
            if (row.coeffs.size() != n) {
                throw std::invalid_argument("lp::solve: row width mismatch");
            }
            const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n; ++j) a_[r * total_ + j] = sign * row.coeffs[j];
            b_[r] = sign * row.rhs;
            Sense sense = row.sense;
            if (sign < 0.0) {
                sense = sense == Sense::LessEqual ? Sense::GreaterEqual
                        : sense == Sense::GreaterEqual ? Sense::LessEqual
                                                       : Sense::Equal;
            }
            if (sense == Sense::LessEqual) {
                a_[r * total_ + next_extra] = 1.0;
                basis_[r] = static_cast<int>(next_extra);
                ++next_extra;
            } else if (sense == Sense::GreaterEqual && b_[r] == 0.0) {
                a_[r * total_ + next_extra] = -1.0;
                basis_[r] = static_cast<int>(next_extra);
                negate_row_[r] = true;  // basis column is -e_r
                ++next_extra;
            } else {
                if (sense == Sense::GreaterEqual) {
                    a_[r * total_ + next_extra] = -1.0;
                    ++next_extra;
                }
                a_[r * total_ + next_artificial] = 1.0;
                basis_[r] = static_cast<int>(next_artificial);
                ++next_artificial;
            }
            state_[static_cast<std::size_t>(basis_[r])] = VarState::Basic;
        }

        // Starting tableau: B^{-1}A where B is the (possibly sign-flipped)
        // identity spanned by the chosen basic columns.
        t_ = a_;
        xb_ = b_;
        for (std::size_t r = 0; r < m_; ++r) {
            if (negate_row_[r]) {
                for (std::size_t j = 0; j < total_; ++j) t_[r * total_ + j] *= -1.0;
                xb_[r] = -b_[r];
            }
        }
        cost_.assign(total_, 0.0);
        d_.assign(total_, 0.0);
    }

    // Runs simplex iterations for the current cost vector.  Returns Optimal
    // when no eligible entering column remains.
    Status iterate() {
        const bool trace = std::getenv("RLAUCTION_LP_TRACE") != nullptr;
        int degenerate_run = 0;
        int pivots_since_refactor = 0;
        bool bland = false;
        while (true) {
            if (trace) {
                const double resid = true_residual();
                if (resid > 1e-6) {
                    std::fprintf(stderr, "lp trace: iteration %d residual %.3e\n",
                                 iterations_, resid);
                }
            }
            if (iterations_ >= opt_.max_iterations) return Status::IterationLimit;

            const std::size_t entering = price(bland);
            if (entering == SIZE_MAX) {
                refactorize();
                return Status::Optimal;
            }
            const double dir = state_[entering] == VarState::AtLower ? 1.0 : -1.0;

            // Two-pass Harris ratio test: the entering variable moves by t
            // along dir and basic variables by -t*dir*T(:,entering).  Pass 1
            // finds the largest step that violates no bound by more than a
            // fixed budget; pass 2 picks the stablest pivot (largest |g|, or
            // the smallest basis index under Bland's rule) among rows whose
            // exact limit fits under that ceiling.  The step taken is the
            // chosen row's own limit, so the leaving variable lands exactly
            // on its bound.
            constexpr double bound_budget = 1e-11;
            const auto row_limit = [&](std::size_t r, double& g_out,
                                       bool& to_upper) -> double {
                const double g = dir * t_[r * total_ + entering];
                g_out = g;
                to_upper = false;
                if (g > opt_.pivot_tol) {
                    return std::max(xb_[r], 0.0) / g;
                }
                if (g < -opt_.pivot_tol &&
                    up_[static_cast<std::size_t>(basis_[r])] < infinity) {
                    to_upper = true;
                    return std::max(
                               up_[static_cast<std::size_t>(basis_[r])] - xb_[r], 0.0) /
                           (-g);
                }
                return infinity;
            };

            double ceiling = up_[entering];  // bound-flip limit
            for (std::size_t r = 0; r < m_; ++r) {
                double g = 0.0;
                bool to_upper = false;
                const double limit = row_limit(r, g, to_upper);
                if (std::isinf(limit)) continue;
                ceiling = std::min(ceiling, limit + bound_budget / std::abs(g));
            }
            if (std::isinf(ceiling)) return Status::Unbounded;

            std::size_t pivot_row = SIZE_MAX;
            bool leaves_to_upper = false;
            double chosen_limit = 0.0, chosen_g = 0.0;
            for (std::size_t r = 0; r < m_; ++r) {
                double g = 0.0;
                bool to_upper = false;
                const double limit = row_limit(r, g, to_upper);
                if (limit > ceiling) continue;
                bool take = pivot_row == SIZE_MAX;
                if (!take) {
                    take = bland ? basis_[r] < basis_[pivot_row]
                                 : std::abs(g) > std::abs(chosen_g);
                }
                if (take) {
                    pivot_row = r;
                    leaves_to_upper = to_upper;
                    chosen_limit = limit;
                    chosen_g = g;
                }
            }

            const double best_t =
                pivot_row == SIZE_MAX ? up_[entering] : std::max(chosen_limit, 0.0);
            ++iterations_;
            degenerate_run = best_t > 1e-12 ? 0 : degenerate_run + 1;
            if (degenerate_run > opt_.degenerate_before_bland) bland = true;

            if (pivot_row == SIZE_MAX) {
                // The entering variable hits its own opposite bound first.
                for (std::size_t r = 0; r < m_; ++r) {
                    xb_[r] -= best_t * dir * t_[r * total_ + entering];
                }
                state_[entering] = state_[entering] == VarState::AtLower
                                       ? VarState::AtUpper
                                       : VarState::AtLower;
                continue;
            }

            const double pivot = t_[pivot_row * total_ + entering];
            if (std::abs(pivot) < opt_.pivot_fail_tol) return Status::NumericalError;

            const double entering_value =
                (state_[entering] == VarState::AtLower ? 0.0 : up_[entering]) +
                dir * best_t;
            for (std::size_t r = 0; r < m_; ++r) {
                if (r != pivot_row) xb_[r] -= best_t * dir * t_[r * total_ + entering];
            }
            const auto leaving = static_cast<std::size_t>(basis_[pivot_row]);
            state_[leaving] = leaves_to_upper ? VarState::AtUpper : VarState::AtLower;
            state_[entering] = VarState::Basic;
            basis_[pivot_row] = static_cast<int>(entering);
            xb_[pivot_row] = entering_value;

            // Gaussian pivot on the tableau and the reduced-cost row.
            double* prow = &t_[pivot_row * total_];
            const double inv = 1.0 / pivot;
            for (std::size_t j = 0; j < total_; ++j) prow[j] *= inv;
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == pivot_row) continue;
                const double factor = t_[r * total_ + entering];
                if (factor == 0.0) continue;
                double* row = &t_[r * total_];
                for (std::size_t j = 0; j < total_; ++j) row[j] -= factor * prow[j];
            }
            const double dfac = d_[entering];
            if (dfac != 0.0) {
                for (std::size_t j = 0; j < total_; ++j) d_[j] -= dfac * prow[j];
            }

            if (++pivots_since_refactor >= 64) {
                refactorize();
                pivots_since_refactor = 0;
            }
        }
    }

    void set_phase1_cost() {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (std::size_t j = artificial_start_; j < total_; ++j) cost_[j] = -1.0;
        reset_reduced_costs();
    }

    void set_phase2_cost(const Model& model) {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        std::copy(model.objective.begin(), model.objective.end(), cost_.begin());
        for (std::size_t j = artificial_start_; j < total_; ++j) up_[j] = 0.0;
        reset_reduced_costs();
    }

    double artificial_infeasibility() const {
        double total = 0.0;
        for (std::size_t r = 0; r < m_; ++r) {
            if (static_cast<std::size_t>(basis_[r]) >= artificial_start_) {
                total += std::max(xb_[r], 0.0);
            }
        }
        return total;
    }

    // Degenerate pivots replacing zero-valued basic artificials with real
    // columns, so their rows cannot drift off zero in phase 2.  Rows whose
    // non-artificial entries all vanish are linearly dependent and keep their
    // artificial at an exact zero.
    void pivot_out_artificials() {
        bool pivoted = false;
        for (std::size_t r = 0; r < m_; ++r) {
            if (static_cast<std::size_t>(basis_[r]) < artificial_start_) continue;
            std::size_t entering = SIZE_MAX;
            double best_mag = 1e-7;
            for (std::size_t j = 0; j < artificial_start_; ++j) {
                if (state_[j] == VarState::Basic) continue;
                const double mag = std::abs(t_[r * total_ + j]);
                if (mag > best_mag) {
                    best_mag = mag;
                    entering = j;
                }
            }
            if (entering == SIZE_MAX) continue;

            const double entering_value =
                state_[entering] == VarState::AtLower ? 0.0 : up_[entering];
            state_[static_cast<std::size_t>(basis_[r])] = VarState::AtLower;
            state_[entering] = VarState::Basic;
            basis_[r] = static_cast<int>(entering);
            xb_[r] = entering_value;

            const double inv = 1.0 / t_[r * total_ + entering];
            double* prow = &t_[r * total_];
            for (std::size_t j = 0; j < total_; ++j) prow[j] *= inv;
            for (std::size_t r2 = 0; r2 < m_; ++r2) {
                if (r2 == r) continue;
                const double factor = t_[r2 * total_ + entering];
                if (factor == 0.0) continue;
                double* row = &t_[r2 * total_];
                for (std::size_t j = 0; j < total_; ++j) row[j] -= factor * prow[j];
            }
            pivoted = true;
        }
        if (pivoted) refactorize();
    }

    std::vector<double> extract() const {
        std::vector<double> x(n_structural_, 0.0);
        for (std::size_t j = 0; j < n_structural_; ++j) {
            if (state_[j] == VarState::AtUpper) x[j] = up_[j];
        }
        for (std::size_t r = 0; r < m_; ++r) {
            const auto j = static_cast<std::size_t>(basis_[r]);
            if (j < n_structural_) x[j] = xb_[r];
        }
        return x;
    }

    int iterations() const { return iterations_; }

  private:
    std::size_t price(bool bland) const {
        std::size_t best = SIZE_MAX;
        double best_score = opt_.reduced_cost_tol;
        for (std::size_t j = 0; j < total_; ++j) {
            if (state_[j] == VarState::Basic || up_[j] <= 0.0) continue;
            double score = 0.0;
            if (state_[j] == VarState::AtLower && d_[j] > opt_.reduced_cost_tol) {
                score = d_[j];
            } else if (state_[j] == VarState::AtUpper && d_[j] < -opt_.reduced_cost_tol) {
                score = -d_[j];
            } else {
                continue;
            }
            if (bland) return j;
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        return best;
    }

    void reset_reduced_costs() {
        d_ = cost_;
        for (std::size_t r = 0; r < m_; ++r) {
            const double cb = cost_[static_cast<std::size_t>(basis_[r])];
            if (cb == 0.0) continue;
            const double* row = &t_[r * total_];
            for (std::size_t j = 0; j < total_; ++j) d_[j] -= cb * row[j];
        }
    }

    // Rebuilds T = B^{-1}A, the basic values, and the reduced costs from the
    // original data.  Leaves the tableau untouched if the basis is singular,
    // which the pivot-magnitude guards make practically unreachable.
    void refactorize() {
        std::vector<double> basis_matrix(m_ * m_);
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c = 0; c < m_; ++c) {
                basis_matrix[r * m_ + c] =
                    a_[r * total_ + static_cast<std::size_t>(basis_[c])];
            }
        }
        LuFactors lu;
        if (!lu.factor(std::move(basis_matrix), m_)) return;

        // xb = B^{-1}(b - A_U u_U)
        std::vector<double> rhs = b_;
        for (std::size_t j = 0; j < total_; ++j) {
            if (state_[j] != VarState::AtUpper || up_[j] == 0.0) continue;
            for (std::size_t r = 0; r < m_; ++r) rhs[r] -= a_[r * total_ + j] * up_[j];
        }
        lu.solve(rhs);
        xb_ = rhs;

        // T column by column.
        std::vector<double> column(m_);
        for (std::size_t j = 0; j < total_; ++j) {
            for (std::size_t r = 0; r < m_; ++r) column[r] = a_[r * total_ + j];
            lu.solve(column);
            for (std::size_t r = 0; r < m_; ++r) t_[r * total_ + j] = column[r];
        }
        reset_reduced_costs();
    }

    // Debug hook: row residuals of the current (basis, state, xb) solution.
    double true_residual() const {
        std::vector<double> x(total_, 0.0);
        for (std::size_t j = 0; j < total_; ++j) {
            if (state_[j] == VarState::AtUpper) x[j] = up_[j];
        }
        for (std::size_t r = 0; r < m_; ++r) {
            x[static_cast<std::size_t>(basis_[r])] = xb_[r];
        }
        double worst = 0.0;
        for (std::size_t r = 0; r < m_; ++r) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < total_; ++j) lhs += a_[r * total_ + j] * x[j];
            worst = std::max(worst, std::abs(lhs - b_[r]));
        }
        return worst;
    }

    const SolveOptions opt_;
    int iterations_ = 0;
    std::size_t m_ = 0;
    std::size_t total_ = 0;
    std::size_t n_structural_ = 0;
    std::size_t artificial_start_ = 0;
    std::vector<double> a_;   // original (sign-normalized) augmented matrix
    std::vector<double> t_;   // B^{-1} A
    std::vector<double> b_;
    std::vector<double> xb_;
    std::vector<double> up_;
    std::vector<double> cost_;
    std::vector<double> d_;
    std::vector<int> basis_;
    std::vector<VarState> state_;
    std::vector<bool> negate_row_;
};

}  // namespace

Solution solve(const Model& model, const SolveOptions& options) {
    Solution solution;
    if (model.upper.size() != model.num_vars()) {
        solution.status = Status::NumericalError;
        solution.message = "upper bound vector does not match variable count";
        return solution;
    }
    if (model.rows.empty()) {
        solution.status = Status::Optimal;
        solution.x.assign(model.num_vars(), 0.0);
        for (std::size_t j = 0; j < model.num_vars(); ++j) {
            if (model.objective[j] > 0.0 && model.upper[j] < infinity) {
                solution.x[j] = model.upper[j];
            }
            solution.objective += model.objective[j] * solution.x[j];
        }
        return solution;
    }

    Tableau tableau(model, options);

    tableau.set_phase1_cost();
    Status status = tableau.iterate();
    if (status != Status::Optimal) {
        solution.status = status == Status::Unbounded ? Status::NumericalError : status;
        solution.iterations = tableau.iterations();
        solution.message = "phase 1 ended with status ";
        solution.message += to_string(status);
        return solution;
    }
    const double infeasibility = tableau.artificial_infeasibility();
    if (infeasibility > 1e-9) {
        std::ostringstream msg;
        msg << "phase 1 residual infeasibility " << infeasibility;
        solution.status = Status::Infeasible;
        solution.iterations = tableau.iterations();
        solution.message = msg.str();
        return solution;
    }

    tableau.pivot_out_artificials();
    tableau.set_phase2_cost(model);
    status = tableau.iterate();
    solution.status = status;
    solution.iterations = tableau.iterations();
    if (status != Status::Optimal) {
        solution.message = "phase 2 ended with status ";
        solution.message += to_string(status);
        return solution;
    }

    solution.x = tableau.extract();
    for (std::size_t j = 0; j < model.num_vars(); ++j) {
        solution.objective += model.objective[j] * solution.x[j];
    }
    return solution;
}

}  // namespace rlauction::lp
