#include "rlauction/virtual_values.hpp"

#include <cmath>
#include <stdexcept>

namespace rlauction {

namespace {

void require_supported_kind(const Instance& inst, bool allow_linear, const char* where) {
    const auto kind = inst.utility().kind;
    if (kind == UtilityKind::Exponential) return;
    if (allow_linear && kind == UtilityKind::Linear) return;
    throw std::invalid_argument(std::string(where) + ": unsupported utility kind '" +
                                to_string(kind) + "'");
}

}  // namespace

VirtualValues virtual_values_single(const Instance& inst) {
    require_supported_kind(inst, /*allow_linear=*/true, "virtual_values_single");
    const auto& v = inst.values();
    const auto& f = inst.pmf();
    const double z_max = inst.z_max();
    const std::size_t K = inst.num_values();

    VirtualValues vv;
    vv.kind = VirtualKind::SingleBuyer;
    vv.phi.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        double term = inst.tail_mass(k) * acceptance_ratio(inst.utility(), v[k], z_max);
        if (k + 1 < K) {
            term -= inst.tail_mass(k + 1) *
                    acceptance_ratio(inst.utility(), v[k + 1], z_max);
        }
        vv.phi[k] = term / f[k];
    }
    vv.regular = is_regular(vv.phi);
    return vv;
}

VirtualValues virtual_values_multi(const Instance& inst) {
    if (inst.buyers() < 2) {
        throw std::invalid_argument("virtual_values_multi: needs at least two buyers");
    }
    require_supported_kind(inst, /*allow_linear=*/false, "virtual_values_multi");
    const auto& v = inst.values();
    const auto& f = inst.pmf();
    const double alpha = inst.utility().alpha;
    const double z_max = inst.z_max();
    const std::size_t K = inst.num_values();

    VirtualValues vv;
    vv.kind = VirtualKind::MultiBuyer;
    vv.phi.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        double term = inst.tail_mass(k) * std::exp(alpha * v[k]) *
                      acceptance_ratio(inst.utility(), v[k], z_max);
        if (k + 1 < K) {
            term -= inst.tail_mass(k + 1) * std::exp(alpha * v[k + 1]) *
                    acceptance_ratio(inst.utility(), v[k + 1], z_max);
        }
        vv.phi[k] = term / f[k];
    }
    vv.regular = is_regular(vv.phi);
    return vv;
}

bool is_regular(std::span<const double> phi) {
    for (std::size_t k = 1; k < phi.size(); ++k) {
        if (!(phi[k] - phi[k - 1] > tol::tie)) return false;
    }
    return true;
}

IronedVirtualValues iron(const VirtualValues& vv, const Instance& inst) {
    const std::size_t K = vv.phi.size();
    if (K != inst.num_values()) {
        throw std::invalid_argument("iron: virtual values do not match the instance");
    }
    const auto& f = inst.pmf();

    // Cumulative curve points (F(k), G(k)), k = 0..K, with the origin first.
    std::vector<double> cx(K + 1, 0.0), cy(K + 1, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        cx[k + 1] = cx[k] + f[k];
        cy[k + 1] = cy[k] + f[k] * vv.phi[k];
    }

    // Lower convex hull, popping only on strictly concave turns so that
    // collinear points stay as vertices and reported intervals are minimal.
    std::vector<std::size_t> hull;
    hull.reserve(K + 1);
    for (std::size_t p = 0; p <= K; ++p) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2];
            const std::size_t b = hull[hull.size() - 1];
            const double cross = (cx[b] - cx[a]) * (cy[p] - cy[a]) -
                                 (cy[b] - cy[a]) * (cx[p] - cx[a]);
            if (cross < 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }

    IronedVirtualValues out;
    out.phi.resize(K);
    for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        const std::size_t a = hull[s];
        const std::size_t b = hull[s + 1];
        if (b == a + 1) {
            out.phi[a] = vv.phi[a];  // untouched step, keep phi exactly
            continue;
        }
        const double slope = (cy[b] - cy[a]) / (cx[b] - cx[a]);
        for (std::size_t k = a; k < b; ++k) out.phi[k] = slope;
        out.intervals.push_back({a, b - 1});
    }

    for (std::size_t k = 0; k < K; ++k) {
        if (out.phi[k] > tol::tie) {
            out.reserve_index = k;
            break;
        }
    }
    return out;
}

}  // namespace rlauction
