#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rlauction/direct.hpp"
#include "rlauction/instance.hpp"
#include "rlauction/virtual_values.hpp"

namespace rlauction {

// ---------------------------------------------------------------------------
// Randomized take-it-or-leave-it price (single buyer)
// ---------------------------------------------------------------------------

/// Accepting buyers get the item and pay z_max with probability
/// pay_high_prob, nothing otherwise.  threshold_value is the smallest value
/// that accepts; indifferent buyers accept.
struct PostedPriceMechanism {
    double threshold_value = 0.0;
    std::size_t threshold_index = 0;
    double pay_high_prob = 0.0;  // acceptance_ratio at the threshold
    double revenue = 0.0;
};

/// Expected revenue z_max * Pr[t >= v] * acceptance_ratio(u, v, z_max) of the
/// randomized price that makes value v exactly indifferent.  v must lie on
/// the value grid.
double posted_price_revenue(const Instance& inst, double v);

/// Maximizes posted_price_revenue over the value grid; ties break toward the
/// smallest value.  Single buyer only.
PostedPriceMechanism optimal_posted_price(const Instance& inst);

// ---------------------------------------------------------------------------
// Loser-pay auction (n >= 2 buyers)
// ---------------------------------------------------------------------------

struct A1Check {
    double value = 0.0;
    double lhs = 0.0;  // ((1 - f(v)/n) / (f(v)/n)) * (e^{alpha v} - 1)
    double rhs = 0.0;  // 1 - e^{-alpha z_max}
    bool ok = false;
};

struct A1Report {
    std::vector<A1Check> per_value;
    bool ok = false;
};

/// Bounded-transfer condition guaranteeing loser payment probabilities stay
/// below 1.  Requires n >= 2 and exponential utility.
A1Report check_assumption_a1(const Instance& inst);

class A1ViolationError : public std::runtime_error {
  public:
    A1ViolationError(std::string message, A1Report report);
    const A1Report& report() const { return report_; }

  private:
    A1Report report_;
};

/// Symmetric interim representation of the loser-pay auction: the bidder with
/// the highest ironed virtual value (strictly above 0) wins and pays nothing,
/// ties split uniformly; losing bidders at or above the reserve pay z_max
/// with probability lose_pay[k].
struct LoserPayMechanism {
    std::vector<double> alloc;     // x(k), non-decreasing, 0 below reserve
    std::vector<double> lose_pay;  // q(k) in [0,1], 0 below reserve
    std::optional<std::size_t> reserve_index;
    std::vector<double> ranking;   // ironed multi-buyer virtual values
    double revenue = 0.0;
};

/// Throws A1ViolationError if the bounded-transfer condition fails, naming
/// the first offending value.
LoserPayMechanism loser_pay_auction(const Instance& inst);

/// Expected utility of bidding values()[bid_index] with true value v:
/// x(k)*u(v) + (1 - x(k))*q(k)*u(-z_max).
double utility_curve(const LoserPayMechanism& mech, const Instance& inst,
                     std::size_t bid_index, double v);

// ---------------------------------------------------------------------------
// Menu mechanisms (single buyer)
// ---------------------------------------------------------------------------

/// One menu entry: allocation probability and the probabilities of paying
/// z_max conditional on winning (win_pay_prob) resp. losing (lose_pay_prob).
/// The payment lottery is supported on {0, z_max} only.
struct MenuOption {
    double alloc = 0.0;
    double win_pay_prob = 0.0;
    double lose_pay_prob = 0.0;
};

/// x*[w1*u(v - z_max) + (1-w1)*u(v)] + (1-x)*w0*u(-z_max).
double menu_utility(const MenuOption& option, const Utility& u, double z_max, double v);

/// z_max * (x*w1 + (1-x)*w0).
double menu_expected_payment(const MenuOption& option, double z_max);

struct MenuMechanism {
    std::vector<MenuOption> options;
    /// Chosen option index per value; nullopt means the null option (0,0,0).
    std::vector<std::optional<std::size_t>> choice;
    double revenue = 0.0;
};

/// Evaluates a utility-maximizing buyer against the menu (the null option is
/// always available).  Indifference within 1e-9 breaks toward the option with
/// the higher expected payment.  Single buyer only.
MenuMechanism menu_mechanism_revenue(std::vector<MenuOption> options, const Instance& inst);

// ---------------------------------------------------------------------------
// Conversion to the direct (LP-level) representation
// ---------------------------------------------------------------------------

DirectMechanism to_direct(const PostedPriceMechanism& mech, const Instance& inst);
DirectMechanism to_direct(const LoserPayMechanism& mech, const Instance& inst);
DirectMechanism to_direct(const MenuMechanism& mech, const Instance& inst);

}  // namespace rlauction
