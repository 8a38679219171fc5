#include "rlauction/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rlauction/mechanisms.hpp"

namespace rlauction {

namespace {

void require_shapes(const DirectMechanism& d, const Instance& inst, const char* where) {
    if (d.buyers != inst.buyers() || d.num_values != inst.num_values() ||
        d.num_payments != inst.num_payments() ||
        d.profile_count() != inst.profile_count()) {
        throw std::invalid_argument(std::string(where) + ": shape mismatch");
    }
}

void note(VerificationReport& report, double violation, double tolerance,
          bool& flag, const std::string& what) {
    report.worst_violation = std::max(report.worst_violation, violation);
    if (violation > tolerance) {
        flag = false;
        if (report.issues.size() < 32) report.issues.push_back({what, violation});
    }
}

}  // namespace

VerificationReport check_bic(const DirectMechanism& d, const Instance& inst,
                             double tolerance) {
    require_shapes(d, inst, "check_bic");
    const InterimMechanism m = interim_of(d, inst);
    VerificationReport report;
    for (int i = 0; i < d.buyers; ++i) {
        for (std::size_t k = 0; k < d.num_values; ++k) {
            const double truthful = interim_utility(m, inst, i, k, k);
            for (std::size_t k2 = 0; k2 < d.num_values; ++k2) {
                const double deviation = interim_utility(m, inst, i, k, k2) - truthful;
                if (deviation > 0.0) {
                    std::ostringstream what;
                    what << "BIC buyer " << i + 1 << ": value " << k + 1
                         << " prefers reporting " << k2 + 1;
                    note(report, deviation, tolerance, report.bic_ok, what.str());
                }
            }
        }
    }
    report.revenue = expected_revenue(d, inst);
    return report;
}

VerificationReport check_ir(const DirectMechanism& d, const Instance& inst,
                            double tolerance) {
    require_shapes(d, inst, "check_ir");
    const InterimMechanism m = interim_of(d, inst);
    VerificationReport report;
    for (int i = 0; i < d.buyers; ++i) {
        for (std::size_t k = 0; k < d.num_values; ++k) {
            const double shortfall = -interim_utility(m, inst, i, k, k);
            if (shortfall > 0.0) {
                std::ostringstream what;
                what << "IR buyer " << i + 1 << ": negative utility at value " << k + 1;
                note(report, shortfall, tolerance, report.ir_ok, what.str());
            }
        }
    }
    report.revenue = expected_revenue(d, inst);
    return report;
}

VerificationReport check_feasibility(const DirectMechanism& d, const Instance& inst,
                                     double tolerance) {
    require_shapes(d, inst, "check_feasibility");
    VerificationReport report;
    const std::size_t profiles = d.profile_count();
    for (std::size_t p = 0; p < profiles; ++p) {
        double item_mass = 0.0;
        for (int i = 0; i < d.buyers; ++i) {
            double outcome_mass = 0.0;
            for (std::size_t j = 0; j < d.num_payments; ++j) {
                for (const double entry : {d.lose(i, j, p), d.win(i, j, p)}) {
                    const double out_of_range =
                        std::max(-entry, entry - 1.0);
                    if (out_of_range > 0.0) {
                        std::ostringstream what;
                        what << "entry outside [0,1] at buyer " << i + 1 << ", payment "
                             << j + 1 << ", profile " << p;
                        note(report, out_of_range, tolerance, report.feasible_ok,
                             what.str());
                    }
                }
                outcome_mass += d.lose(i, j, p) + d.win(i, j, p);
                item_mass += d.win(i, j, p);
            }
            const double gap = std::abs(outcome_mass - 1.0);
            if (gap > 0.0) {
                std::ostringstream what;
                what << "outcome distribution of buyer " << i + 1 << " at profile " << p
                     << " sums to " << outcome_mass;
                note(report, gap, tolerance, report.feasible_ok, what.str());
            }
        }
        if (item_mass - 1.0 > 0.0) {
            std::ostringstream what;
            what << "profile " << p << " allocates total mass " << item_mass;
            note(report, item_mass - 1.0, tolerance, report.feasible_ok, what.str());
        }
    }
    report.revenue = expected_revenue(d, inst);
    return report;
}

double expected_revenue(const DirectMechanism& d, const Instance& inst) {
    require_shapes(d, inst, "expected_revenue");
    ProfileSpace space(d.num_values, d.buyers);
    std::vector<std::size_t> digits(static_cast<std::size_t>(d.buyers));
    const auto& z = inst.payments();
    double total = 0.0;
    for (std::size_t p = 0; p < space.count(); ++p) {
        space.decode(p, digits);
        const double fp = space.pmf(digits, inst.pmf());
        double paid = 0.0;
        for (int i = 0; i < d.buyers; ++i) {
            for (std::size_t j = 0; j < d.num_payments; ++j) {
                paid += z[j] * (d.lose(i, j, p) + d.win(i, j, p));
            }
        }
        total += fp * paid;
    }
    return total;
}

VerificationReport verify_direct(const DirectMechanism& d, const Instance& inst,
                                 double tolerance) {
    VerificationReport bic = check_bic(d, inst, tolerance);
    VerificationReport ir = check_ir(d, inst, tolerance);
    VerificationReport feas = check_feasibility(d, inst, tolerance);
    VerificationReport report;
    report.bic_ok = bic.bic_ok;
    report.ir_ok = ir.ir_ok;
    report.feasible_ok = feas.feasible_ok;
    report.worst_violation = std::max({bic.worst_violation, ir.worst_violation,
                                       feas.worst_violation});
    report.revenue = bic.revenue;
    for (const auto* part : {&bic, &ir, &feas}) {
        report.issues.insert(report.issues.end(), part->issues.begin(),
                             part->issues.end());
    }
    return report;
}

// ---------------------------------------------------------------------------
// Dual machinery
// ---------------------------------------------------------------------------

double dual_gamma(const DualCertificate& cert, const Instance& inst, int buyer,
                  std::size_t k, double z) {
    const auto& u = inst.utility();
    const auto& v = inst.values();
    double total = inst.pmf()[k] * z;
    for (std::size_t k2 = 0; k2 < cert.num_values; ++k2) {
        const double out = cert.lambda_at(buyer, k, k2);
        const double in = cert.lambda_at(buyer, k2, k);
        if (out != 0.0) total += out * eval_utility(u, v[k] - z);
        if (in != 0.0) total -= in * eval_utility(u, v[k2] - z);
    }
    total += cert.mu_at(buyer, k) * eval_utility(u, v[k] - z);
    return total;
}

double dual_pi(const DualCertificate& cert, const Instance& inst, int buyer,
               std::size_t k, double z) {
    double net = cert.mu_at(buyer, k);
    for (std::size_t k2 = 0; k2 < cert.num_values; ++k2) {
        net += cert.lambda_at(buyer, k, k2) - cert.lambda_at(buyer, k2, k);
    }
    return inst.pmf()[k] * z + net * eval_utility(inst.utility(), -z);
}

DualShapeReport classify_dual_shape(const DualCertificate& cert, const Instance& inst,
                                    int buyer, std::size_t k) {
    if (inst.utility().kind != UtilityKind::Exponential) {
        throw std::invalid_argument("classify_dual_shape: exponential utility only");
    }
    const double alpha = inst.utility().alpha;
    const auto& v = inst.values();
    DualShapeReport report;
    for (std::size_t k2 = 0; k2 < cert.num_values; ++k2) {
        const double out = cert.lambda_at(buyer, k, k2);
        const double in = cert.lambda_at(buyer, k2, k);
        report.a_coeff += out - in;
        report.b_coeff += out * std::exp(alpha * v[k]) - in * std::exp(alpha * v[k2]);
    }
    report.a_coeff += cert.mu_at(buyer, k);
    report.b_coeff += cert.mu_at(buyer, k) * std::exp(alpha * v[k]);
    report.gamma_shape =
        report.b_coeff > 0.0 ? DualShape::StronglyConvex : DualShape::Increasing;
    report.pi_shape =
        report.a_coeff > 0.0 ? DualShape::StronglyConvex : DualShape::Increasing;
    return report;
}

namespace {

void require_exponential(const Instance& inst, const char* where) {
    if (inst.utility().kind != UtilityKind::Exponential) {
        throw std::invalid_argument(std::string(where) + ": exponential utility only");
    }
}

// Adjacent-pair loops that move Gamma_k(0) from f*phi*z_M to f*phi_ironed*z_M
// inside each ironed interval.  A loop of magnitude L between steps l and
// l+1 adds L*scale(k)/(u(v_k)-u(v_k-z_M)) to lambda on both legs and shifts
// Gamma_{l+1}(0) up (and Gamma_l(0) down) by L*(strength(l+1)-strength(l)),
// where strength(k) = scale(k)*acceptance_ratio(v_k).  The running surplus
// transferred from step l to l+1 is sum_{m<=l} f(v_m)(phi - phi_ironed)(m)*z_M,
// which is non-negative inside an interval and zero at its end.
template <typename Strength, typename Scale>
void add_ironing_loops(DualCertificate& cert, const Instance& inst,
                       const VirtualValues& vv, const IronedVirtualValues& ivv,
                       Strength strength, Scale scale) {
    const auto& u = inst.utility();
    const auto& v = inst.values();
    const auto& f = inst.pmf();
    const double z_max = inst.z_max();
    for (const IronedInterval& interval : ivv.intervals) {
        double surplus = 0.0;
        for (std::size_t l = interval.first; l < interval.last; ++l) {
            surplus += f[l] * (vv.phi[l] - ivv.phi[l]) * z_max;
            if (surplus <= 0.0) continue;  // exact touch point, nothing to move
            const double magnitude = surplus / (strength(l + 1) - strength(l));
            for (int i = 0; i < cert.buyers; ++i) {
                cert.lambda_at(i, l + 1, l) +=
                    magnitude * scale(l + 1) / utility_gap(u, v[l + 1], z_max);
                cert.lambda_at(i, l, l + 1) +=
                    magnitude * scale(l) / utility_gap(u, v[l], z_max);
            }
        }
    }
}

}  // namespace

DualCertificate build_dual_certificate_single(const Instance& inst) {
    require_exponential(inst, "build_dual_certificate_single");
    if (inst.buyers() != 1) {
        throw std::invalid_argument("build_dual_certificate_single: single buyer only");
    }
    const auto& u = inst.utility();
    const auto& v = inst.values();
    const auto& f = inst.pmf();
    const double z_max = inst.z_max();
    const std::size_t K = inst.num_values();

    DualCertificate cert;
    cert.kind = VirtualKind::SingleBuyer;
    cert.buyers = 1;
    cert.num_values = K;
    cert.lambda.assign(K * K, 0.0);
    cert.mu.assign(K, 0.0);
    for (std::size_t k = 1; k < K; ++k) {
        cert.lambda_at(0, k, k - 1) =
            inst.tail_mass(k) * z_max / utility_gap(u, v[k], z_max);
    }
    // The lowest type's downward leg is its participation constraint: mu_1
    // carries the k'=k-1 coefficient there (u(v_1) = 0 makes the two
    // algebraically interchangeable, and without it Pi_1(z_M) sticks out
    // above nu_1).
    cert.mu[0] = inst.tail_mass(0) * z_max / utility_gap(u, v[0], z_max);

    const VirtualValues vv = virtual_values_single(inst);
    const IronedVirtualValues ivv = iron(vv, inst);
    add_ironing_loops(
        cert, inst, vv, ivv,
        [&](std::size_t k) { return acceptance_ratio(u, v[k], z_max); },
        [](std::size_t) { return 1.0; });

    cert.nu.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        cert.nu[k] = std::max(0.0, f[k] * ivv.phi[k] * z_max);
        cert.objective += cert.nu[k];
    }
    return cert;
}

DualCertificate build_dual_certificate_multi(const Instance& inst) {
    require_exponential(inst, "build_dual_certificate_multi");
    if (inst.buyers() < 2) {
        throw std::invalid_argument("build_dual_certificate_multi: needs at least two buyers");
    }
    {
        const A1Report a1 = check_assumption_a1(inst);
        if (!a1.ok) {
            throw A1ViolationError(
                "build_dual_certificate_multi: bounded-transfer condition fails", a1);
        }
    }
    const auto& u = inst.utility();
    const auto& v = inst.values();
    const double alpha = u.alpha;
    const double z_max = inst.z_max();
    const std::size_t K = inst.num_values();
    const int n = inst.buyers();

    DualCertificate cert;
    cert.kind = VirtualKind::MultiBuyer;
    cert.buyers = n;
    cert.num_values = K;
    cert.lambda.assign(static_cast<std::size_t>(n) * K * K, 0.0);
    cert.mu.assign(static_cast<std::size_t>(n) * K, 0.0);
    for (int i = 0; i < n; ++i) {
        for (std::size_t k = 1; k < K; ++k) {
            cert.lambda_at(i, k, k - 1) = inst.tail_mass(k) * z_max *
                                          std::exp(alpha * v[k]) /
                                          utility_gap(u, v[k], z_max);
        }
        // Participation multiplier of the lowest type, as in the single case.
        cert.mu[static_cast<std::size_t>(i) * K] =
            inst.tail_mass(0) * z_max * std::exp(alpha * v[0]) /
            utility_gap(u, v[0], z_max);
    }

    const VirtualValues vv = virtual_values_multi(inst);
    const IronedVirtualValues ivv = iron(vv, inst);
    add_ironing_loops(
        cert, inst, vv, ivv,
        [&](std::size_t k) {
            return std::exp(alpha * v[k]) * acceptance_ratio(u, v[k], z_max);
        },
        [&](std::size_t k) { return std::exp(alpha * v[k]); });

    ProfileSpace space(K, n);
    cert.nu.assign(static_cast<std::size_t>(n) * space.count(), 0.0);
    cert.gamma.assign(space.count(), 0.0);
    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < space.count(); ++p) {
        space.decode(p, digits);
        double best = 0.0;
        for (int i = 0; i < n; ++i) best = std::max(best, ivv.phi[digits[i]]);
        cert.gamma[p] = std::max(0.0, space.pmf(digits, inst.pmf()) * best * z_max);
        cert.objective += cert.gamma[p];
    }
    return cert;
}

DualFeasibilityReport check_dual_feasibility(const DualCertificate& cert,
                                             const Instance& inst, double tolerance) {
    if (cert.num_values != inst.num_values() || cert.buyers != inst.buyers()) {
        throw std::invalid_argument("check_dual_feasibility: certificate/instance mismatch");
    }
    DualFeasibilityReport report;
    report.feasible = true;
    report.worst_slack = std::numeric_limits<double>::infinity();

    auto consider = [&](double slack, const std::string& what) {
        if (slack < report.worst_slack) {
            report.worst_slack = slack;
            report.worst_constraint = what;
        }
        if (slack < -tolerance) report.feasible = false;
    };

    for (std::size_t idx = 0; idx < cert.lambda.size(); ++idx) {
        if (cert.lambda[idx] < 0.0) consider(cert.lambda[idx], "lambda sign");
    }
    for (std::size_t idx = 0; idx < cert.mu.size(); ++idx) {
        if (cert.mu[idx] < 0.0) consider(cert.mu[idx], "mu sign");
    }
    for (std::size_t idx = 0; idx < cert.gamma.size(); ++idx) {
        if (cert.gamma[idx] < 0.0) consider(cert.gamma[idx], "gamma sign");
    }

    const auto& z = inst.payments();
    const std::size_t K = cert.num_values;
    if (cert.kind == VirtualKind::SingleBuyer) {
        for (std::size_t k = 0; k < K; ++k) {
            report.shapes.push_back(classify_dual_shape(cert, inst, 0, k));
            for (std::size_t j = 0; j < z.size(); ++j) {
                std::ostringstream at;
                at << "k=" << k + 1 << ", z_" << j + 1;
                consider(cert.nu[k] - dual_gamma(cert, inst, 0, k, z[j]),
                         "Gamma at " + at.str());
                consider(cert.nu[k] - dual_pi(cert, inst, 0, k, z[j]),
                         "Pi at " + at.str());
            }
        }
        return report;
    }

    // Multi buyer: precompute the per-(buyer, value, payment) dual values,
    // then sweep profiles with the opponents' pmf weights.
    const int n = cert.buyers;
    std::vector<double> gam(static_cast<std::size_t>(n) * K * z.size());
    std::vector<double> pi(gam.size());
    for (int i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            report.shapes.push_back(classify_dual_shape(cert, inst, i, k));
            for (std::size_t j = 0; j < z.size(); ++j) {
                const std::size_t at = (static_cast<std::size_t>(i) * K + k) * z.size() + j;
                gam[at] = dual_gamma(cert, inst, i, k, z[j]);
                pi[at] = dual_pi(cert, inst, i, k, z[j]);
            }
        }
    }

    ProfileSpace space(K, n);
    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < space.count(); ++p) {
        space.decode(p, digits);
        const double fp = space.pmf(digits, inst.pmf());
        for (int i = 0; i < n; ++i) {
            const double f_others = fp / inst.pmf()[digits[i]];
            const double nu_ip = cert.nu[static_cast<std::size_t>(i) * space.count() + p];
            for (std::size_t j = 0; j < z.size(); ++j) {
                const std::size_t at =
                    (static_cast<std::size_t>(i) * K + digits[i]) * z.size() + j;
                std::ostringstream where;
                where << "buyer " << i + 1 << ", profile " << p << ", z_" << j + 1;
                consider(nu_ip + cert.gamma[p] - f_others * gam[at],
                         "Gamma at " + where.str());
                consider(nu_ip - f_others * pi[at], "Pi at " + where.str());
            }
        }
    }
    return report;
}

double duality_gap(const DualCertificate& cert, double mechanism_revenue) {
    return cert.objective - mechanism_revenue;
}

}  // namespace rlauction
