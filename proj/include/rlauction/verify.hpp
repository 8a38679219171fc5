#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rlauction/direct.hpp"
#include "rlauction/instance.hpp"
#include "rlauction/virtual_values.hpp"

namespace rlauction {

struct CheckIssue {
    std::string what;
    double violation = 0.0;
};

struct VerificationReport {
    bool bic_ok = true;
    bool ir_ok = true;
    bool feasible_ok = true;
    double worst_violation = 0.0;
    double revenue = 0.0;
    std::vector<CheckIssue> issues;

    bool all_ok() const { return bic_ok && ir_ok && feasible_ok; }
};

/// Truthful reporting beats every misreport for every buyer and value pair,
/// up to tolerance.
VerificationReport check_bic(const DirectMechanism& d, const Instance& inst,
                             double tolerance = tol::prob);

/// Truthful participation yields non-negative interim utility.
VerificationReport check_ir(const DirectMechanism& d, const Instance& inst,
                            double tolerance = tol::prob);

/// Entries in [0,1], per-(buyer,profile) outcome distributions proper, and at
/// most one item allocated per profile.
VerificationReport check_feasibility(const DirectMechanism& d, const Instance& inst,
                                     double tolerance = tol::prob);

double expected_revenue(const DirectMechanism& d, const Instance& inst);

/// All three checks plus revenue in one report.
VerificationReport verify_direct(const DirectMechanism& d, const Instance& inst,
                                 double tolerance = tol::prob);

// ---------------------------------------------------------------------------
// Dual certificates
// ---------------------------------------------------------------------------

/// Dual variables proving mechanism optimality.  Single buyer: lambda is
/// K x K (BIC pair weights), mu length K (IR weights), nu length K
/// (feasibility), gamma empty and objective = sum(nu).  Multi buyer: lambda
/// is per buyer (n*K*K), mu n*K, nu has one entry per (buyer, profile) — all
/// zero in the constructed certificates — and gamma one entry per profile
/// (single-item constraint); objective = sum(nu) + sum(gamma).
struct DualCertificate {
    VirtualKind kind = VirtualKind::SingleBuyer;
    int buyers = 1;
    std::size_t num_values = 0;
    std::vector<double> lambda;
    std::vector<double> mu;
    std::vector<double> nu;
    std::vector<double> gamma;
    double objective = 0.0;

    double lambda_at(int buyer, std::size_t k, std::size_t k_other) const {
        return lambda[(static_cast<std::size_t>(buyer) * num_values + k) * num_values +
                      k_other];
    }
    double& lambda_at(int buyer, std::size_t k, std::size_t k_other) {
        return lambda[(static_cast<std::size_t>(buyer) * num_values + k) * num_values +
                      k_other];
    }
    double mu_at(int buyer, std::size_t k) const {
        return mu[static_cast<std::size_t>(buyer) * num_values + k];
    }
};

/// Gamma_{i,k}(z) = f(v_k) z
///                + sum_{k'} (lambda_{i,k,k'} u(v_k - z) - lambda_{i,k',k} u(v_{k'} - z))
///                + mu_{i,k} u(v_k - z);
/// the left-hand side of the dual constraint matched to the win variables.
double dual_gamma(const DualCertificate& cert, const Instance& inst, int buyer,
                  std::size_t k, double z);

/// Pi_{i,k}(z) = f(v_k) z + (sum_{k'} (lambda_{i,k,k'} - lambda_{i,k',k}) + mu_{i,k}) u(-z);
/// matched to the lose variables.
double dual_pi(const DualCertificate& cert, const Instance& inst, int buyer,
               std::size_t k, double z);

enum class DualShape { Increasing, StronglyConvex };

/// Gamma_k and Pi_k rewrite as f(v_k) z + beta*B_k e^{-alpha z} - beta*A_k and
/// f(v_k) z + beta*A_k e^{-alpha z} - beta*A_k; each is strongly convex if its
/// exponential coefficient is positive and increasing otherwise, so interior
/// payment-grid points can never be the binding ones.
struct DualShapeReport {
    double a_coeff = 0.0;  // sum_{k'}(lambda_{kk'} - lambda_{k'k}) + mu_k
    double b_coeff = 0.0;  // sum_{k'}(lambda_{kk'} e^{a v_k} - lambda_{k'k} e^{a v_k'}) + mu_k e^{a v_k}
    DualShape gamma_shape = DualShape::Increasing;
    DualShape pi_shape = DualShape::Increasing;
};

DualShapeReport classify_dual_shape(const DualCertificate& cert, const Instance& inst,
                                    int buyer, std::size_t k);

/// Single-buyer certificate: mu = 0, lambda_{k,k-1} = tail(k) z_max /
/// (u(v_k) - u(v_k - z_max)), plus adjacent-pair loops inside each ironed
/// interval so that Gamma_k(0) = f(v_k) * phi_ironed(k) * z_max; nu_k =
/// max{0, f(v_k) phi_ironed(k) z_max}.  Exponential utility, single buyer.
DualCertificate build_dual_certificate_single(const Instance& inst);

/// Multi-buyer certificate per the same pattern with the extra e^{alpha v_k}
/// factor in lambda, nu = 0 and gamma_p = max{0, f(p) * max_i
/// phi_ironed(k_i) * z_max}.  Requires n >= 2, exponential utility and the
/// bounded-transfer condition.
DualCertificate build_dual_certificate_multi(const Instance& inst);

struct DualFeasibilityReport {
    bool feasible = false;
    double worst_slack = 0.0;  // most negative slack found
    std::string worst_constraint;
    std::vector<DualShapeReport> shapes;  // per (buyer, k)
};

/// Evaluates every dual constraint at every payment-grid point (not only the
/// endpoints the shape argument would allow) and requires slack >= -tolerance.
/// Also validates sign constraints on lambda, mu, gamma.
DualFeasibilityReport check_dual_feasibility(const DualCertificate& cert,
                                             const Instance& inst,
                                             double tolerance = tol::prob);

/// Certificate objective minus mechanism revenue; optimality is certified
/// when the certificate is feasible and |gap| <= 1e-8.
double duality_gap(const DualCertificate& cert, double mechanism_revenue);

}  // namespace rlauction
