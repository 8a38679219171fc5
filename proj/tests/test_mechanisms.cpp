#include <doctest.h>

#include <cmath>
#include <random>

#include "rlauction/mechanisms.hpp"
#include "rlauction/verify.hpp"
#include "test_support.hpp"

using namespace rlauction;
using namespace rlauction::testing;

TEST_CASE("posted price on the quadratic counterexample instance") {
    const Instance inst = quadratic_counterexample_instance();
    const PostedPriceMechanism mech = optimal_posted_price(inst);
    CHECK(mech.threshold_value == doctest::Approx(0.4));
    CHECK(mech.pay_high_prob == doctest::Approx(0.96 / 1.80).epsilon(1e-12));
    CHECK(mech.revenue == doctest::Approx(0.32).epsilon(1e-12));

    CHECK(posted_price_revenue(inst, 0.5) == doctest::Approx(0.3125).epsilon(1e-12));
    CHECK(posted_price_revenue(inst, 0.0) == 0.0);
    CHECK_THROWS_AS(posted_price_revenue(inst, 0.45), std::domain_error);
}

TEST_CASE("posted price on the two-point instance") {
    const Instance inst = two_point_instance();
    const PostedPriceMechanism mech = optimal_posted_price(inst);
    CHECK(mech.threshold_value == 1.0);
    CHECK(mech.pay_high_prob == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(mech.revenue == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(posted_price_revenue(inst, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("posted price degenerate single-value grid") {
    const Instance inst({0.0}, {1.0}, {0.0, 1.0}, 1, Utility::exponential(1.0));
    const PostedPriceMechanism mech = optimal_posted_price(inst);
    CHECK(mech.threshold_value == 0.0);
    CHECK(mech.pay_high_prob == 0.0);
    CHECK(mech.revenue == 0.0);
}

TEST_CASE("posted price threshold sits at the ironed reserve on regular instances") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = random_single_exponential(rng);
        const VirtualValues vv = virtual_values_single(inst);
        if (!vv.regular) continue;
        const IronedVirtualValues ivv = iron(vv, inst);
        const PostedPriceMechanism mech = optimal_posted_price(inst);
        REQUIRE(ivv.reserve_index.has_value());
        CHECK(mech.threshold_index == *ivv.reserve_index);
    }
}

TEST_CASE("assumption A1 report") {
    CHECK(check_assumption_a1(example_two_buyers(0.1, 100.0)).ok);
    // 3*(e^{0.1}-1) = 0.3155... < 1 - e^{-10}.
    const A1Report pass = check_assumption_a1(example_two_buyers(0.1, 100.0));
    CHECK(pass.per_value[1].lhs == doctest::Approx(3.0 * std::expm1(0.1)).epsilon(1e-12));
    CHECK(pass.per_value[0].ok);  // v = 0 always passes
    CHECK(pass.per_value[0].lhs == 0.0);

    const A1Report fail = check_assumption_a1(example_two_buyers(std::log(2.0), 2.0));
    CHECK_FALSE(fail.ok);
    CHECK(fail.per_value[0].ok);
    CHECK_FALSE(fail.per_value[1].ok);
    CHECK(fail.per_value[1].lhs == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fail.per_value[1].rhs == doctest::Approx(0.75).epsilon(1e-12));

    CHECK_THROWS_AS(loser_pay_auction(example_two_buyers(std::log(2.0), 2.0)),
                    A1ViolationError);
}

TEST_CASE("loser-pay auction reproduces the two-buyer worked example") {
    const double alpha = 0.1, z_max = 100.0;
    const Instance inst = example_two_buyers(alpha, z_max);
    const LoserPayMechanism mech = loser_pay_auction(inst);

    REQUIRE(mech.reserve_index.has_value());
    CHECK(*mech.reserve_index == 1);
    CHECK(mech.alloc[0] == 0.0);
    CHECK(mech.alloc[1] == doctest::Approx(0.75).epsilon(1e-13));
    const double q_expected = 3.0 * std::expm1(alpha) / -std::expm1(-alpha * z_max);
    CHECK(mech.lose_pay[0] == 0.0);
    CHECK(mech.lose_pay[1] == doctest::Approx(q_expected).epsilon(1e-12));
    CHECK(mech.lose_pay[1] == doctest::Approx(0.31553).epsilon(1e-4));
    const double revenue_expected =
        0.75 * std::expm1(alpha) / -std::expm1(-alpha * z_max) * z_max;
    CHECK(mech.revenue == doctest::Approx(revenue_expected).epsilon(1e-12));
    CHECK(mech.revenue == doctest::Approx(7.8882).epsilon(1e-4));

    // Utility curve: top type indifferent, bottom bidder honest zero, and the
    // worked misreport value -(3/4)(e^alpha - 1).
    CHECK(utility_curve(mech, inst, 1, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(utility_curve(mech, inst, 0, 0.0) == 0.0);
    CHECK(utility_curve(mech, inst, 0, 1.0) == 0.0);  // below reserve: no allocation
    CHECK(utility_curve(mech, inst, 1, 0.0) ==
          doctest::Approx(-0.75 * std::expm1(alpha)).epsilon(1e-12));
}

TEST_CASE("loser-pay with nothing above reserve") {
    // A synthetic check through the public surface: values {0} only.
    const Instance inst({0.0}, {1.0}, {0.0, 10.0}, 2, Utility::exponential(0.05));
    const LoserPayMechanism mech = loser_pay_auction(inst);
    CHECK_FALSE(mech.reserve_index.has_value());
    CHECK(mech.revenue == 0.0);
    CHECK(mech.alloc[0] == 0.0);
    CHECK(mech.lose_pay[0] == 0.0);
}

TEST_CASE("loser-pay q agreement between sum form and recursion") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance inst = random_multi_a1(rng, 2 + trial % 2, 2 + trial % 2,
                                              trial % 3 == 0);
        const LoserPayMechanism mech = loser_pay_auction(inst);
        if (!mech.reserve_index) continue;
        const double pay_scale = -eval_utility(inst.utility(), -inst.z_max());
        for (std::size_t k = *mech.reserve_index; k < inst.num_values(); ++k) {
            // q(k) = (x(k) u(v_k) - U_{k-1}(v_k)) / ((1 - x(k)) * (-u(-z_M)))
            const double previous =
                k == *mech.reserve_index ? 0.0
                                         : utility_curve(mech, inst, k - 1,
                                                         inst.values()[k]);
            const double recursive =
                (mech.alloc[k] * eval_utility(inst.utility(), inst.values()[k]) -
                 previous) /
                ((1.0 - mech.alloc[k]) * pay_scale);
            CHECK(mech.lose_pay[k] == doctest::Approx(recursive).epsilon(1e-9));
        }
    }
}

TEST_CASE("loser-pay feasibility, monotonicity, IR and BIC properties") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        const int buyers = 2 + trial % 2;
        const Instance inst =
            random_multi_a1(rng, buyers, 2 + (trial / 2) % 2, trial % 3 == 1);
        const LoserPayMechanism mech = loser_pay_auction(inst);
        const std::size_t K = inst.num_values();
        for (std::size_t k = 0; k < K; ++k) {
            CHECK(mech.lose_pay[k] >= -1e-12);
            CHECK(mech.lose_pay[k] <= 1.0 + 1e-12);
            if (k > 0) CHECK(mech.alloc[k] >= mech.alloc[k - 1] - 1e-15);
            // IR at truthful bid.
            CHECK(utility_curve(mech, inst, k, inst.values()[k]) >= -1e-9);
            // BIC across every misreport.
            for (std::size_t k2 = 0; k2 < K; ++k2) {
                CHECK(utility_curve(mech, inst, k, inst.values()[k]) >=
                      utility_curve(mech, inst, k2, inst.values()[k]) - 1e-9);
            }
        }
    }
}

TEST_CASE("beta rescales utility without changing any mechanism") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        const Instance base = random_single_exponential(rng, trial % 2 == 0);
        const Utility scaled = Utility::exponential(base.utility().alpha, 3.7);
        const Instance rescaled(base.values(), base.pmf(), base.payments(), 1, scaled);
        const PostedPriceMechanism a = optimal_posted_price(base);
        const PostedPriceMechanism b = optimal_posted_price(rescaled);
        CHECK(a.threshold_index == b.threshold_index);
        CHECK(a.pay_high_prob == doctest::Approx(b.pay_high_prob).epsilon(1e-12));
        CHECK(a.revenue == doctest::Approx(b.revenue).epsilon(1e-12));
    }
    const Instance pair = example_two_buyers();
    const Instance pair_scaled({0.0, 1.0}, {0.5, 0.5}, {0.0, 100.0}, 2,
                               Utility::exponential(0.1, 5.0));
    const LoserPayMechanism a = loser_pay_auction(pair);
    const LoserPayMechanism b = loser_pay_auction(pair_scaled);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(a.alloc[k] == doctest::Approx(b.alloc[k]).epsilon(1e-12));
        CHECK(a.lose_pay[k] == doctest::Approx(b.lose_pay[k]).epsilon(1e-12));
    }
    CHECK(a.revenue == doctest::Approx(b.revenue).epsilon(1e-12));
}

TEST_CASE("menu utilities reproduce the worked quadratic curves") {
    const Utility quad = Utility::quadratic(1.0);
    const MenuOption first{1.0 / 1.96, 0.0, 1.0};
    const MenuOption second{1.0, 1536.0 / 2695.0, 0.0};

    // Boundary type 0.4 is exactly indifferent on the first option.
    CHECK(menu_utility(first, quad, 1.0, 0.4) == doctest::Approx(0.0).epsilon(1e-12));
    // U1(v) = (1/1.96)(v+1)^2 - 1 on a grid.
    for (double v = 0.0; v < 0.95; v += 0.1) {
        CHECK(menu_utility(first, quad, 1.0, v) ==
              doctest::Approx((v + 1.0) * (v + 1.0) / 1.96 - 1.0).epsilon(1e-12));
        // U2 - U1 = (24/2695)(11v+3)(5v-3).
        const double diff = menu_utility(second, quad, 1.0, v) -
                            menu_utility(first, quad, 1.0, v);
        CHECK(diff == doctest::Approx(24.0 / 2695.0 * (11.0 * v + 3.0) * (5.0 * v - 3.0))
                          .epsilon(1e-10));
    }
    // Null option is worthless at every value.
    for (double v = 0.0; v < 1.0; v += 0.3) {
        CHECK(menu_utility(MenuOption{}, quad, 1.0, v) == 0.0);
    }
    // Crossing point 0.6: equal utilities.
    CHECK(menu_utility(second, quad, 1.0, 0.6) ==
          doctest::Approx(menu_utility(first, quad, 1.0, 0.6)).epsilon(1e-12));
}

TEST_CASE("menu mechanism revenue on the quadratic counterexample") {
    const Instance inst = quadratic_counterexample_instance();
    const MenuMechanism menu = menu_mechanism_revenue(
        {MenuOption{1.0 / 1.96, 0.0, 1.0}, MenuOption{1.0, 1536.0 / 2695.0, 0.0}}, inst);
    const double expected = 0.96 / 1.96 * 0.2 + 1536.0 / 2695.0 * 0.4;
    CHECK(menu.revenue == doctest::Approx(expected).epsilon(1e-12));
    CHECK(menu.revenue == doctest::Approx(0.3259).epsilon(1e-3));

    // Values 0..0.3 stay out, 0.4 and 0.5 take the first option, 0.6+ the second.
    for (std::size_t k = 0; k < 4; ++k) CHECK_FALSE(menu.choice[k].has_value());
    for (std::size_t k = 4; k < 6; ++k) {
        REQUIRE(menu.choice[k].has_value());
        CHECK(*menu.choice[k] == 0);
    }
    for (std::size_t k = 6; k < 10; ++k) {
        REQUIRE(menu.choice[k].has_value());
        CHECK(*menu.choice[k] == 1);
    }

    // The menu beats the optimal take-it-or-leave-it price.
    CHECK(menu.revenue > optimal_posted_price(inst).revenue);
}

TEST_CASE("menu edge cases") {
    const Instance inst = two_point_instance();
    CHECK(menu_mechanism_revenue({}, inst).revenue == 0.0);
    CHECK(menu_mechanism_revenue({MenuOption{}}, inst).revenue == 0.0);

    // A singleton menu with the optimal posted option matches the posted path.
    const PostedPriceMechanism posted = optimal_posted_price(inst);
    const MenuMechanism as_menu =
        menu_mechanism_revenue({MenuOption{1.0, posted.pay_high_prob, 0.0}}, inst);
    CHECK(as_menu.revenue == doctest::Approx(posted.revenue).epsilon(1e-12));
}

TEST_CASE("no single two-point menu option beats the optimal posted price") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 3; ++trial) {
        const Instance inst = random_single_exponential(rng);
        const double best = optimal_posted_price(inst).revenue;
        double best_menu = 0.0;
        for (int xi = 0; xi <= 100; ++xi) {
            for (int w1 = 0; w1 <= 100; ++w1) {
                for (int w0 = 0; w0 <= 100; ++w0) {
                    const MenuOption option{xi / 100.0, w1 / 100.0, w0 / 100.0};
                    const double payment = menu_expected_payment(option, inst.z_max());
                    if (payment <= best_menu) continue;  // cannot improve
                    double revenue = 0.0;
                    for (std::size_t k = 0; k < inst.num_values(); ++k) {
                        if (menu_utility(option, inst.utility(), inst.z_max(),
                                         inst.values()[k]) >= -1e-12) {
                            revenue += inst.pmf()[k] * payment;
                        }
                    }
                    best_menu = std::max(best_menu, revenue);
                }
            }
        }
        CHECK(best_menu <= best * (1.0 + 1e-9) + 1e-9);
    }
}

TEST_CASE("to_direct posted price and menus") {
    const Instance inst = two_point_instance();
    const PostedPriceMechanism posted = optimal_posted_price(inst);
    const DirectMechanism direct = to_direct(posted, inst);
    const VerificationReport report = verify_direct(direct, inst);
    CHECK(report.all_ok());
    CHECK(report.revenue == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // Null menu: everything parked on lose-pay-zero.
    const MenuMechanism null_menu = menu_mechanism_revenue({}, inst);
    const DirectMechanism null_direct = to_direct(null_menu, inst);
    CHECK(verify_direct(null_direct, inst).all_ok());
    CHECK(expected_revenue(null_direct, inst) == 0.0);
    for (std::size_t k = 0; k < inst.num_values(); ++k) {
        CHECK(null_direct.lose(0, 0, k) == 1.0);
    }
}

TEST_CASE("to_direct loser-pay matches the interim mechanism exactly") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 12; ++trial) {
        const Instance inst = random_multi_a1(rng, 2 + trial % 2, 2 + trial % 3,
                                              trial % 2 == 0);
        const LoserPayMechanism mech = loser_pay_auction(inst);
        const DirectMechanism direct = to_direct(mech, inst);
        const VerificationReport report = verify_direct(direct, inst);
        CHECK(report.all_ok());
        CHECK(report.worst_violation <= 1e-9);
        CHECK(expected_revenue(direct, inst) ==
              doctest::Approx(mech.revenue).epsilon(1e-12));

        const InterimMechanism interim = interim_of(direct, inst);
        for (int i = 0; i < inst.buyers(); ++i) {
            for (std::size_t k = 0; k < inst.num_values(); ++k) {
                CHECK(interim.alloc[interim.kindex(i, k)] ==
                      doctest::Approx(mech.alloc[k]).epsilon(1e-12));
                const double top_pay =
                    interim.y0[interim.index(i, k, inst.num_payments() - 1)];
                CHECK(top_pay == doctest::Approx((1.0 - mech.alloc[k]) *
                                                 mech.lose_pay[k])
                                     .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("to_direct on the worked two-buyer example") {
    const Instance inst = example_two_buyers();
    const LoserPayMechanism mech = loser_pay_auction(inst);
    const DirectMechanism direct = to_direct(mech, inst);
    CHECK(verify_direct(direct, inst).all_ok());
    CHECK(expected_revenue(direct, inst) == doctest::Approx(7.8882).epsilon(1e-4));
}
