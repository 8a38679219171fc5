#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rlauction/utility.hpp"

namespace rlauction {

/// A complete problem input: discrete value grid, value distribution,
/// discrete payment grid, number of symmetric buyers, and their utility.
///
/// Invariants (checked at construction):
///   - values strictly increasing with values[0] == 0
///   - pmf entries > 0 and summing to 1 (within 1e-12)
///   - payments strictly increasing with payments[0] == 0 and
///     payments.back() > values.back()
///   - buyers >= 1
///   - quadratic utility requires shift > payments.back()
///
/// Immutable after construction; all accessors are safe for concurrent use.
class Instance {
  public:
    Instance(std::vector<double> values, std::vector<double> pmf,
             std::vector<double> payments, int buyers, Utility utility);

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& pmf() const { return pmf_; }
    const std::vector<double>& payments() const { return payments_; }
    int buyers() const { return buyers_; }
    const Utility& utility() const { return utility_; }

    std::size_t num_values() const { return values_.size(); }    // K
    std::size_t num_payments() const { return payments_.size(); }  // M
    double z_max() const { return payments_.back(); }

    /// Sum of pmf over indices >= k (tail_mass(0) == 1, tail_mass(K) == 0).
    double tail_mass(std::size_t k) const { return tails_[k]; }

    /// Pr[t >= v] for arbitrary v.
    double prob_at_least(double v) const;

    /// Index of v in the value grid, or throws std::domain_error.
    std::size_t value_index(double v) const;

    /// K^buyers, guarded against overflow of size_t.
    std::size_t profile_count() const;

  private:
    std::vector<double> values_;
    std::vector<double> pmf_;
    std::vector<double> payments_;
    int buyers_;
    Utility utility_;
    std::vector<double> tails_;  // tails_[k] = sum_{k' >= k} pmf_[k'], size K+1
};

/// Mixed-radix walker over value profiles in [K]^n; buyer 0 is the least
/// significant digit.
class ProfileSpace {
  public:
    ProfileSpace(std::size_t num_values, int buyers);

    std::size_t count() const { return count_; }
    int buyers() const { return buyers_; }

    void decode(std::size_t id, std::span<std::size_t> out) const;
    std::size_t encode(std::span<const std::size_t> digits) const;

    /// Probability of the profile under i.i.d. draws from pmf.
    double pmf(std::span<const std::size_t> digits, std::span<const double> f) const;

  private:
    std::size_t num_values_;
    int buyers_;
    std::size_t count_;
};

}  // namespace rlauction
