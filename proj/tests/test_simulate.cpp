#include <doctest.h>

#include <cmath>

#include "rlauction/simulate.hpp"
#include "rlauction/verify.hpp"
#include "test_support.hpp"

using namespace rlauction;
using namespace rlauction::testing;

TEST_CASE("simulation is deterministic for a fixed seed") {
    const Instance inst = two_point_instance();
    const AnyMechanism mech = optimal_posted_price(inst);
    const SimulationResult a = simulate_mechanism(mech, inst, 20000, 42);
    const SimulationResult b = simulate_mechanism(mech, inst, 20000, 42);
    CHECK(a.mean_revenue == b.mean_revenue);
    CHECK(a.std_error == b.std_error);
    const SimulationResult c = simulate_mechanism(mech, inst, 20000, 43);
    CHECK(a.mean_revenue != c.mean_revenue);
}

TEST_CASE("null mechanism simulates to exactly zero") {
    const Instance inst = two_point_instance();
    const AnyMechanism mech = menu_mechanism_revenue({}, inst);
    const SimulationResult sim = simulate_mechanism(mech, inst, 5000, 7);
    CHECK(sim.mean_revenue == 0.0);
    CHECK(sim.std_error == 0.0);
}

TEST_CASE("posted price simulation brackets the analytic revenue") {
    const Instance inst = two_point_instance();
    const PostedPriceMechanism mech = optimal_posted_price(inst);
    const SimulationResult sim = simulate_mechanism(mech, inst, 200000, 1);
    CHECK(std::abs(sim.mean_revenue - mech.revenue) <= 4.0 * sim.std_error);
    // Two-point revenue distribution {0, 2}: std error near sqrt(8/9)/sqrt(N).
    CHECK(sim.std_error == doctest::Approx(std::sqrt(8.0 / 9.0 / 200000.0)).epsilon(0.05));
}

TEST_CASE("loser-pay simulation brackets the analytic revenue") {
    const Instance inst = example_two_buyers();
    const LoserPayMechanism mech = loser_pay_auction(inst);
    const SimulationResult sim = simulate_mechanism(mech, inst, 200000, 5);
    CHECK(std::abs(sim.mean_revenue - mech.revenue) <= 4.0 * sim.std_error);
}

TEST_CASE("direct-table simulation matches its expected revenue") {
    const Instance inst = example_two_buyers();
    const DirectMechanism direct = to_direct(loser_pay_auction(inst), inst);
    const double analytic = expected_revenue(direct, inst);
    const SimulationResult sim = simulate_mechanism(direct, inst, 200000, 11);
    CHECK(std::abs(sim.mean_revenue - analytic) <= 4.0 * sim.std_error);
}

TEST_CASE("menu simulation brackets the analytic revenue") {
    const Instance inst = quadratic_counterexample_instance();
    const MenuMechanism menu = menu_mechanism_revenue(
        {MenuOption{1.0 / 1.96, 0.0, 1.0}, MenuOption{1.0, 1536.0 / 2695.0, 0.0}}, inst);
    const SimulationResult sim = simulate_mechanism(menu, inst, 200000, 3);
    CHECK(std::abs(sim.mean_revenue - menu.revenue) <= 4.0 * sim.std_error);
}
