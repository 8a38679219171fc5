#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rlauction/instance.hpp"

namespace rlauction {

enum class VirtualKind { SingleBuyer, MultiBuyer };

/// Virtual value per value index, with the regularity flag (strictly
/// increasing within the tie tolerance).
struct VirtualValues {
    VirtualKind kind = VirtualKind::SingleBuyer;
    std::vector<double> phi;
    bool regular = false;
};

/// phi(k) = ( tail(k)*r(v_k) - tail(k+1)*r(v_{k+1}) ) / f(v_k) with
/// r(v) = acceptance_ratio(u, v, z_max) and the second term dropped at k = K.
/// Exponential or linear utility only.
VirtualValues virtual_values_single(const Instance& inst);

/// Multi-buyer variant: each ratio term carries an extra e^{alpha*v} factor.
/// Exponential utility and at least two buyers required.
VirtualValues virtual_values_multi(const Instance& inst);

/// Strict monotone increase with ties (differences <= 1e-12) counting as
/// irregular.
bool is_regular(std::span<const double> phi);
inline bool is_regular(const VirtualValues& vv) { return is_regular(vv.phi); }

struct IronedInterval {
    std::size_t first = 0;  // inclusive, 0-based
    std::size_t last = 0;   // inclusive
};

struct IronedVirtualValues {
    std::vector<double> phi;                // monotone non-decreasing
    std::vector<IronedInterval> intervals;  // maximal ironed ranges
    std::optional<std::size_t> reserve_index;  // min k with phi[k] > 1e-12
};

/// Myerson-style ironing: lower convex envelope of the f-weighted cumulative
/// virtual value curve G(k) = sum_{l<=k} f(v_l)*phi(l) plotted against the
/// cumulative probability F(k).  Within each envelope segment spanning more
/// than one step the ironed value is the segment slope, which equals the
/// f-weighted average of phi over the segment; elsewhere phi is unchanged.
IronedVirtualValues iron(const VirtualValues& vv, const Instance& inst);

}  // namespace rlauction
