#include "rlauction/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace rlauction {

std::size_t SplitMix64::next_index(std::span<const double> pmf) {
    const double coin = next_unit();
    double cumulative = 0.0;
    for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
        cumulative += pmf[k];
        if (coin < cumulative) return k;
    }
    return pmf.size() - 1;
}

namespace {

struct Tally {
    double sum = 0.0;
    double sum_sq = 0.0;
    void add(double x) {
        sum += x;
        sum_sq += x * x;
    }
};

// Revenue of one played-out auction; draws lottery coins as needed.
double play_posted_price(const PostedPriceMechanism& mech, const Instance& inst,
                         std::size_t k, SplitMix64& rng) {
    if (k < mech.threshold_index) return 0.0;
    return rng.next_unit() < mech.pay_high_prob ? inst.z_max() : 0.0;
}

double play_menu(const MenuMechanism& mech, const Instance& inst, std::size_t k,
                 SplitMix64& rng) {
    if (!mech.choice[k]) return 0.0;
    const MenuOption& opt = mech.options[*mech.choice[k]];
    const bool won = rng.next_unit() < opt.alloc;
    const double pay_prob = won ? opt.win_pay_prob : opt.lose_pay_prob;
    return rng.next_unit() < pay_prob ? inst.z_max() : 0.0;
}

double play_loser_pay(const LoserPayMechanism& mech, const Instance& inst,
                      std::span<const std::size_t> bids, SplitMix64& rng) {
    // Highest ironed virtual value wins (ties split by one uniform draw);
    // selling losers pay z_max with their interim coin.
    const int n = inst.buyers();
    int winner = -1;
    double best = 0.0;
    int tie_count = 0;
    for (int i = 0; i < n; ++i) {
        const double rank = mech.ranking[bids[i]];
        if (rank <= tol::tie) continue;  // below reserve, never wins
        if (winner < 0 || rank > best + tol::tie) {
            best = rank;
            winner = i;
            tie_count = 1;
        } else if (rank >= best - tol::tie) {
            // Reservoir-style uniform choice among tied bidders.
            ++tie_count;
            if (rng.next_unit() < 1.0 / tie_count) winner = i;
        }
    }
    double revenue = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == winner) continue;  // winners pay nothing
        const double q = mech.lose_pay[bids[i]];
        if (q > 0.0 && rng.next_unit() < q) revenue += inst.z_max();
    }
    return revenue;
}

double play_direct(const DirectMechanism& mech, const Instance& inst,
                   std::span<const std::size_t> bids, SplitMix64& rng) {
    ProfileSpace space(inst.num_values(), inst.buyers());
    const std::size_t p = space.encode(bids);
    double revenue = 0.0;
    for (int i = 0; i < inst.buyers(); ++i) {
        double coin = rng.next_unit();
        for (std::size_t j = 0; j < mech.num_payments; ++j) {
            coin -= mech.win(i, j, p);
            if (coin < 0.0) {
                revenue += inst.payments()[j];
                break;
            }
            coin -= mech.lose(i, j, p);
            if (coin < 0.0) {
                revenue += inst.payments()[j];
                break;
            }
        }
        // Leftover mass (tables sum to 1 up to rounding) counts as no sale,
        // no payment.
    }
    return revenue;
}

}  // namespace

SimulationResult simulate_mechanism(const AnyMechanism& mech, const Instance& inst,
                                    std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("simulate_mechanism: samples must be >= 1");
    SplitMix64 rng(seed);
    Tally tally;
    std::vector<std::size_t> bids(static_cast<std::size_t>(inst.buyers()));
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& bid : bids) bid = rng.next_index(inst.pmf());
        const double revenue = std::visit(
            [&](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, PostedPriceMechanism>) {
                    return play_posted_price(m, inst, bids[0], rng);
                } else if constexpr (std::is_same_v<T, MenuMechanism>) {
                    return play_menu(m, inst, bids[0], rng);
                } else if constexpr (std::is_same_v<T, LoserPayMechanism>) {
                    return play_loser_pay(m, inst, bids, rng);
                } else {
                    return play_direct(m, inst, bids, rng);
                }
            },
            mech);
        tally.add(revenue);
    }
    SimulationResult result;
    result.samples = samples;
    result.seed = seed;
    const double count = static_cast<double>(samples);
    result.mean_revenue = tally.sum / count;
    const double variance =
        std::max(0.0, tally.sum_sq / count - result.mean_revenue * result.mean_revenue);
    result.std_error = samples > 1 ? std::sqrt(variance / (count - 1.0)) : 0.0;
    return result;
}

}  // namespace rlauction
