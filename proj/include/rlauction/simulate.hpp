#pragma once

#include <cstdint>
#include <span>
#include <variant>

#include "rlauction/instance.hpp"
#include "rlauction/mechanisms.hpp"

namespace rlauction {

/// Counter-based generator: draw i is output i of the SplitMix64 sequence
/// seeded with `seed`.  Reproducible across platforms for a fixed seed.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Inverse-CDF draw from a discrete pmf.
    std::size_t next_index(std::span<const double> pmf);

  private:
    std::uint64_t state_;
};

using AnyMechanism =
    std::variant<PostedPriceMechanism, LoserPayMechanism, MenuMechanism, DirectMechanism>;

struct SimulationResult {
    double mean_revenue = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Draws `samples` i.i.d. value profiles, plays the mechanism including its
/// internal lotteries, and reports the mean total revenue per auction with
/// its standard error.  Deterministic for fixed (samples, seed): draws come
/// from one sequential SplitMix64 stream consumed in a fixed order per
/// sample (buyer values first, then lottery coins).
SimulationResult simulate_mechanism(const AnyMechanism& mech, const Instance& inst,
                                    std::size_t samples, std::uint64_t seed);

}  // namespace rlauction
