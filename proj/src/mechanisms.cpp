#include "rlauction/mechanisms.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rlauction {

// ---------------------------------------------------------------------------
// Posted price
// ---------------------------------------------------------------------------

double posted_price_revenue(const Instance& inst, double v) {
    const std::size_t k = inst.value_index(v);
    return inst.z_max() * inst.tail_mass(k) *
           acceptance_ratio(inst.utility(), v, inst.z_max());
}

PostedPriceMechanism optimal_posted_price(const Instance& inst) {
    if (inst.buyers() != 1) {
        throw std::invalid_argument("optimal_posted_price: single buyer only");
    }
    PostedPriceMechanism best;
    best.threshold_value = inst.values()[0];
    best.threshold_index = 0;
    best.pay_high_prob = 0.0;
    best.revenue = 0.0;
    for (std::size_t k = 0; k < inst.num_values(); ++k) {
        const double ratio =
            acceptance_ratio(inst.utility(), inst.values()[k], inst.z_max());
        const double revenue = inst.z_max() * inst.tail_mass(k) * ratio;
        if (revenue > best.revenue) {
            best.threshold_value = inst.values()[k];
            best.threshold_index = k;
            best.pay_high_prob = ratio;
            best.revenue = revenue;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Assumption (A1) and the loser-pay auction
// ---------------------------------------------------------------------------

A1Report check_assumption_a1(const Instance& inst) {
    if (inst.buyers() < 2) {
        throw std::invalid_argument("check_assumption_a1: needs at least two buyers");
    }
    if (inst.utility().kind != UtilityKind::Exponential) {
        throw std::invalid_argument("check_assumption_a1: exponential utility only");
    }
    const double alpha = inst.utility().alpha;
    const double n = static_cast<double>(inst.buyers());
    A1Report report;
    report.ok = true;
    const double rhs = -std::expm1(-alpha * inst.z_max());  // 1 - e^{-a z_M}
    for (std::size_t k = 0; k < inst.num_values(); ++k) {
        const double share = inst.pmf()[k] / n;
        A1Check check;
        check.value = inst.values()[k];
        check.lhs = (1.0 - share) / share * std::expm1(alpha * inst.values()[k]);
        check.rhs = rhs;
        check.ok = check.lhs < check.rhs;
        report.ok = report.ok && check.ok;
        report.per_value.push_back(check);
    }
    return report;
}

A1ViolationError::A1ViolationError(std::string message, A1Report report)
    : std::runtime_error(std::move(message)), report_(std::move(report)) {}

namespace {

// Consecutive runs of (within-tolerance) equal ironed virtual values; the
// allocation rule treats every member of a class as the same bid strength.
struct TieClasses {
    std::vector<std::size_t> class_of;   // per value index
    std::vector<double> class_mass;     // pmf mass per class
    std::vector<bool> class_sells;      // ironed value above the reserve threshold
};

TieClasses tie_classes(const std::vector<double>& phi, const Instance& inst) {
    TieClasses t;
    t.class_of.resize(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) {
        if (k > 0 && std::abs(phi[k] - phi[k - 1]) <= tol::tie) {
            t.class_of[k] = t.class_of[k - 1];
            t.class_mass.back() += inst.pmf()[k];
        } else {
            t.class_of[k] = t.class_mass.size();
            t.class_mass.push_back(inst.pmf()[k]);
            t.class_sells.push_back(phi[k] > tol::tie);
        }
    }
    return t;
}

// Interim win probability of a bid in class c: the probability that all
// opponents fall in weakly lower classes, split uniformly among class ties.
// Closed form of sum_m C(n-1,m) eq^m less^{n-1-m} / (m+1).
double interim_win_prob(const TieClasses& t, std::size_t c, int buyers) {
    double less = 0.0;
    for (std::size_t d = 0; d < c; ++d) less += t.class_mass[d];
    const double eq = t.class_mass[c];
    const double n = static_cast<double>(buyers);
    return (std::pow(less + eq, n) - std::pow(less, n)) / (n * eq);
}

}  // namespace

LoserPayMechanism loser_pay_auction(const Instance& inst) {
    if (inst.buyers() < 2) {
        throw std::invalid_argument("loser_pay_auction: needs at least two buyers");
    }
    A1Report a1 = check_assumption_a1(inst);
    if (!a1.ok) {
        std::ostringstream msg;
        msg << "loser_pay_auction: bounded-transfer condition fails";
        for (const auto& check : a1.per_value) {
            if (!check.ok) {
                msg << " at v=" << check.value << " (" << check.lhs << " >= " << check.rhs
                    << ")";
                break;
            }
        }
        throw A1ViolationError(msg.str(), std::move(a1));
    }

    const VirtualValues vv = virtual_values_multi(inst);
    const IronedVirtualValues ivv = iron(vv, inst);
    const std::size_t K = inst.num_values();
    const TieClasses classes = tie_classes(ivv.phi, inst);

    LoserPayMechanism mech;
    mech.ranking = ivv.phi;
    mech.alloc.assign(K, 0.0);
    mech.lose_pay.assign(K, 0.0);

    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t c = classes.class_of[k];
        if (!classes.class_sells[c]) continue;
        if (!mech.reserve_index) mech.reserve_index = k;
        mech.alloc[k] = interim_win_prob(classes, c, inst.buyers());
    }

    if (mech.reserve_index) {
        const auto& u = inst.utility();
        const double pay_scale = -eval_utility(u, -inst.z_max());  // -u(-z_M) > 0
        double running = 0.0;  // sum of (x(k')-x(k'-1)) u(v_{k'}) from the reserve up
        double prev_alloc = 0.0;
        for (std::size_t k = *mech.reserve_index; k < K; ++k) {
            running += (mech.alloc[k] - prev_alloc) * eval_utility(u, inst.values()[k]);
            prev_alloc = mech.alloc[k];
            mech.lose_pay[k] = running / ((1.0 - mech.alloc[k]) * pay_scale);
        }
        for (std::size_t k = *mech.reserve_index; k < K; ++k) {
            mech.revenue += inst.pmf()[k] * (1.0 - mech.alloc[k]) * mech.lose_pay[k];
        }
        mech.revenue *= static_cast<double>(inst.buyers()) * inst.z_max();
    }
    return mech;
}

double utility_curve(const LoserPayMechanism& mech, const Instance& inst,
                     std::size_t bid_index, double v) {
    if (bid_index >= mech.alloc.size()) {
        throw std::out_of_range("utility_curve: bid index out of range");
    }
    const double x = mech.alloc[bid_index];
    const double q = mech.lose_pay[bid_index];
    return x * eval_utility(inst.utility(), v) +
           (1.0 - x) * q * eval_utility(inst.utility(), -inst.z_max());
}

// ---------------------------------------------------------------------------
// Menus
// ---------------------------------------------------------------------------

double menu_utility(const MenuOption& option, const Utility& u, double z_max, double v) {
    return option.alloc * (option.win_pay_prob * eval_utility(u, v - z_max) +
                           (1.0 - option.win_pay_prob) * eval_utility(u, v)) +
           (1.0 - option.alloc) * option.lose_pay_prob * eval_utility(u, -z_max);
}

double menu_expected_payment(const MenuOption& option, double z_max) {
    return z_max * (option.alloc * option.win_pay_prob +
                    (1.0 - option.alloc) * option.lose_pay_prob);
}

MenuMechanism menu_mechanism_revenue(std::vector<MenuOption> options,
                                     const Instance& inst) {
    if (inst.buyers() != 1) {
        throw std::invalid_argument("menu_mechanism_revenue: single buyer only");
    }
    for (const auto& option : options) {
        if (option.alloc < 0.0 || option.alloc > 1.0 || option.win_pay_prob < 0.0 ||
            option.win_pay_prob > 1.0 || option.lose_pay_prob < 0.0 ||
            option.lose_pay_prob > 1.0) {
            throw std::invalid_argument("menu_mechanism_revenue: option outside [0,1]^3");
        }
    }

    MenuMechanism mech;
    mech.options = std::move(options);
    mech.choice.assign(inst.num_values(), std::nullopt);
    const double z_max = inst.z_max();
    for (std::size_t k = 0; k < inst.num_values(); ++k) {
        const double v = inst.values()[k];
        double best_utility = 0.0;  // the null option
        double best_payment = 0.0;
        std::optional<std::size_t> best;
        for (std::size_t o = 0; o < mech.options.size(); ++o) {
            const double utility = menu_utility(mech.options[o], inst.utility(), z_max, v);
            const double payment = menu_expected_payment(mech.options[o], z_max);
            if (utility > best_utility + tol::prob ||
                (utility > best_utility - tol::prob && payment > best_payment)) {
                best_utility = utility;
                best_payment = payment;
                best = o;
            }
        }
        mech.choice[k] = best;
        mech.revenue += inst.pmf()[k] * best_payment;
    }
    return mech;
}

// ---------------------------------------------------------------------------
// Direct-table conversions
// ---------------------------------------------------------------------------

namespace {

void fill_single_buyer_option(DirectMechanism& d, std::size_t k, const MenuOption& opt) {
    const std::size_t top = d.num_payments - 1;
    d.win(0, top, k) = opt.alloc * opt.win_pay_prob;
    d.win(0, 0, k) = opt.alloc * (1.0 - opt.win_pay_prob);
    d.lose(0, top, k) = (1.0 - opt.alloc) * opt.lose_pay_prob;
    d.lose(0, 0, k) = (1.0 - opt.alloc) * (1.0 - opt.lose_pay_prob);
}

}  // namespace

DirectMechanism to_direct(const PostedPriceMechanism& mech, const Instance& inst) {
    if (inst.buyers() != 1) {
        throw std::invalid_argument("to_direct(posted price): single buyer only");
    }
    DirectMechanism d = DirectMechanism::zeros(inst);
    for (std::size_t k = 0; k < inst.num_values(); ++k) {
        if (k >= mech.threshold_index) {
            fill_single_buyer_option(d, k, MenuOption{1.0, mech.pay_high_prob, 0.0});
        } else {
            d.lose(0, 0, k) = 1.0;
        }
    }
    return d;
}

DirectMechanism to_direct(const MenuMechanism& mech, const Instance& inst) {
    if (inst.buyers() != 1) {
        throw std::invalid_argument("to_direct(menu): single buyer only");
    }
    if (mech.choice.size() != inst.num_values()) {
        throw std::invalid_argument("to_direct(menu): choice table does not match instance");
    }
    DirectMechanism d = DirectMechanism::zeros(inst);
    for (std::size_t k = 0; k < inst.num_values(); ++k) {
        if (mech.choice[k]) {
            fill_single_buyer_option(d, k, mech.options.at(*mech.choice[k]));
        } else {
            d.lose(0, 0, k) = 1.0;
        }
    }
    return d;
}

DirectMechanism to_direct(const LoserPayMechanism& mech, const Instance& inst) {
    if (inst.buyers() < 2) {
        throw std::invalid_argument("to_direct(loser pay): needs at least two buyers");
    }
    if (mech.ranking.size() != inst.num_values() ||
        mech.alloc.size() != inst.num_values()) {
        throw std::invalid_argument("to_direct(loser pay): mechanism does not match instance");
    }
    const TieClasses classes = tie_classes(mech.ranking, inst);
    DirectMechanism d = DirectMechanism::zeros(inst);
    const std::size_t top = d.num_payments - 1;

    ProfileSpace space(inst.num_values(), inst.buyers());
    std::vector<std::size_t> digits(static_cast<std::size_t>(inst.buyers()));
    for (std::size_t p = 0; p < space.count(); ++p) {
        space.decode(p, digits);
        // Winners: selling bids in the profile's top tie class.
        std::size_t best_class = 0;
        bool any_seller = false;
        for (int i = 0; i < inst.buyers(); ++i) {
            const std::size_t c = classes.class_of[digits[i]];
            if (classes.class_sells[c] && (!any_seller || c > best_class)) {
                best_class = c;
                any_seller = true;
            }
        }
        int winners = 0;
        if (any_seller) {
            for (int i = 0; i < inst.buyers(); ++i) {
                if (classes.class_of[digits[i]] == best_class) ++winners;
            }
        }
        for (int i = 0; i < inst.buyers(); ++i) {
            const std::size_t k = digits[i];
            const std::size_t c = classes.class_of[k];
            const double win_prob = (any_seller && c == best_class)
                                        ? 1.0 / static_cast<double>(winners)
                                        : 0.0;
            d.win(i, 0, p) = win_prob;  // winners pay z_1 = 0
            const double lose_prob = 1.0 - win_prob;
            if (classes.class_sells[c]) {
                d.lose(i, top, p) = lose_prob * mech.lose_pay[k];
                d.lose(i, 0, p) = lose_prob * (1.0 - mech.lose_pay[k]);
            } else {
                d.lose(i, 0, p) = lose_prob;
            }
        }
    }
    return d;
}

}  // namespace rlauction
