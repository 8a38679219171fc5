#include "rlauction/utility.hpp"

#include <cmath>

namespace rlauction {

namespace {

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(std::string("Utility: ") + name + " must be positive");
    }
}

}  // namespace

Utility Utility::exponential(double alpha, double beta) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    Utility u;
    u.kind = UtilityKind::Exponential;
    u.alpha = alpha;
    u.beta = beta;
    return u;
}

Utility Utility::linear(double slope) {
    require_positive(slope, "slope");
    Utility u;
    u.kind = UtilityKind::Linear;
    u.slope = slope;
    return u;
}

Utility Utility::quadratic(double shift, double beta) {
    require_positive(shift, "L");
    require_positive(beta, "beta");
    Utility u;
    u.kind = UtilityKind::Quadratic;
    u.shift = shift;
    u.beta = beta;
    return u;
}

const char* to_string(UtilityKind kind) {
    switch (kind) {
        case UtilityKind::Exponential: return "exponential";
        case UtilityKind::Linear: return "linear";
        case UtilityKind::Quadratic: return "quadratic";
    }
    return "?";
}

double eval_utility(const Utility& u, double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("eval_utility: non-finite argument");
    }
    switch (u.kind) {
        case UtilityKind::Exponential:
            return u.beta * std::expm1(u.alpha * x);
        case UtilityKind::Linear:
            return u.slope * x;
        case UtilityKind::Quadratic:
            if (x < -u.shift) {
                throw std::domain_error("eval_utility: quadratic utility below -L");
            }
            // beta*((x+L)^2 - L^2) without forming the large squares.
            return u.beta * x * (x + 2.0 * u.shift);
    }
    throw std::logic_error("eval_utility: unknown utility kind");
}

double utility_gap(const Utility& u, double v, double z) {
    switch (u.kind) {
        case UtilityKind::Exponential:
            // beta*(e^{a v} - e^{a(v-z)}) = beta*e^{a v}*(1 - e^{-a z})
            return u.beta * std::exp(u.alpha * v) * (-std::expm1(-u.alpha * z));
        case UtilityKind::Linear:
            return u.slope * z;
        case UtilityKind::Quadratic:
            // beta*((v+L)^2 - (v-z+L)^2) = beta*z*(2(v+L) - z)
            return u.beta * z * (2.0 * (v + u.shift) - z);
    }
    throw std::logic_error("utility_gap: unknown utility kind");
}

double acceptance_ratio(const Utility& u, double v, double z_max) {
    if (!(v >= 0.0) || !(z_max > v)) {
        throw std::domain_error("acceptance_ratio: requires 0 <= v < z_max");
    }
    if (v == 0.0) return 0.0;
    if (u.kind == UtilityKind::Exponential) {
        // u(v)/(u(v)-u(v-z)) simplifies to (1-e^{-a v})/(1-e^{-a z}).
        return std::expm1(-u.alpha * v) / std::expm1(-u.alpha * z_max);
    }
    const double num = eval_utility(u, v);
    const double den = utility_gap(u, v, z_max);
    if (den <= 0.0) {
        throw std::logic_error("acceptance_ratio: utility is not strictly increasing");
    }
    return num / den;
}

}  // namespace rlauction
