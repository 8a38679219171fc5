#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace rlauction {

// Default numeric tolerances used throughout the library.
namespace tol {
inline constexpr double prob = 1e-9;     // absolute, probabilities and constraint slack
inline constexpr double revenue = 1e-9;  // relative, revenue comparisons
inline constexpr double gap = 1e-8;      // absolute, duality gap certification
inline constexpr double tie = 1e-12;     // strictness threshold for virtual-value comparisons
}  // namespace tol

enum class UtilityKind { Exponential, Linear, Quadratic };

/// Buyer utility function with u(0) = 0, strictly increasing on the domain
/// of interest.  Exponential: u(x) = beta*(exp(alpha*x) - 1).  Linear:
/// u(x) = slope*x.  Quadratic: u(x) = beta*((x + shift)^2 - shift^2),
/// increasing for x >= -shift.
struct Utility {
    UtilityKind kind = UtilityKind::Exponential;
    double alpha = 1.0;  // exponential curvature, > 0
    double beta = 1.0;   // scale for exponential and quadratic, > 0
    double slope = 1.0;  // linear coefficient, > 0
    double shift = 0.0;  // quadratic shift (the "L" in (x+L)^2 - L^2), > 0

    static Utility exponential(double alpha, double beta = 1.0);
    static Utility linear(double slope = 1.0);
    static Utility quadratic(double shift, double beta = 1.0);
};

const char* to_string(UtilityKind kind);

/// u(x).  Exponential uses expm1 so that u(0) == 0 exactly and small
/// |alpha*x| keeps full precision.
double eval_utility(const Utility& u, double x);

/// u(v) - u(v - z), evaluated in a cancellation-free form per kind.
double utility_gap(const Utility& u, double v, double z);

/// u(v) / (u(v) - u(v - z_max)): the largest probability of charging z_max
/// that a buyer with value v accepts.  0 at v = 0; always in [0, 1) for
/// 0 <= v < z_max.  Exponential uses the simplified form
/// (1 - e^{-alpha v}) / (1 - e^{-alpha z_max}).
double acceptance_ratio(const Utility& u, double v, double z_max);

}  // namespace rlauction
