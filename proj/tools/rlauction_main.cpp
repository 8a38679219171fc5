// Command-line front end: solve instances, verify mechanisms against the
// duality certificates, cross-check with the LP oracle, inspect ironing,
// reproduce the quadratic counterexample, and Monte-Carlo a mechanism.
//
// Exit codes: 0 success/verified, 1 input error, 2 bounded-transfer
// assumption failure, 3 verification or duality-gap failure.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlauction/json_io.hpp"
#include "rlauction/lp_oracle.hpp"
#include "rlauction/mechanisms.hpp"
#include "rlauction/simulate.hpp"
#include "rlauction/verify.hpp"
#include "rlauction/virtual_values.hpp"

namespace {

using nlohmann::json;
using namespace rlauction;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_assumption = 2;
constexpr int exit_verification = 3;

json a1_report_to_json(const A1Report& report) {
    json j;
    j["ok"] = report.ok;
    j["per_value"] = json::array();
    for (const auto& check : report.per_value) {
        j["per_value"].push_back({{"value", check.value},
                                  {"lhs", check.lhs},
                                  {"rhs", check.rhs},
                                  {"ok", check.ok}});
    }
    return j;
}

json ironing_to_json(const VirtualValues& vv, const IronedVirtualValues& ivv) {
    json j;
    j["kind"] = vv.kind == VirtualKind::SingleBuyer ? "single" : "multi";
    j["phi"] = vv.phi;
    j["regular"] = vv.regular;
    j["phi_ironed"] = ivv.phi;
    j["intervals"] = json::array();
    for (const auto& interval : ivv.intervals) {
        j["intervals"].push_back({interval.first + 1, interval.last + 1});
    }
    j["reserve_index"] = ivv.reserve_index ? json(*ivv.reserve_index + 1) : json(nullptr);
    return j;
}

void emit(const json& j, const std::string& out_path) {
    if (!out_path.empty()) {
        write_json_file(out_path, j);
    } else {
        std::cout << to_json_text(j) << "\n";
    }
}

int cmd_solve(const std::string& instance_path, const std::string& out_path,
              bool machine) {
    const Instance inst = load_instance_file(instance_path);
    json summary;
    AnyMechanism mech;
    if (inst.buyers() == 1) {
        const PostedPriceMechanism pp = optimal_posted_price(inst);
        mech = pp;
        summary["revenue"] = pp.revenue;
        summary["v_star"] = pp.threshold_value;
        summary["p_high"] = pp.pay_high_prob;
    } else {
        if (inst.utility().kind != UtilityKind::Exponential) {
            std::cerr << "solve: multi-buyer instances need exponential utility\n";
            return exit_input;
        }
        const A1Report a1 = check_assumption_a1(inst);
        if (!a1.ok) {
            json j;
            j["error"] = "assumption A1 (bounded transfers) fails";
            j["a1"] = a1_report_to_json(a1);
            std::cout << to_json_text(j) << "\n";
            return exit_assumption;
        }
        const LoserPayMechanism lp = loser_pay_auction(inst);
        summary["revenue"] = lp.revenue;
        summary["reserve_index"] =
            lp.reserve_index ? json(*lp.reserve_index + 1) : json(nullptr);
        mech = lp;
    }

    // Ironing diagnostics accompany every solvable exponential/linear instance.
    if (inst.utility().kind != UtilityKind::Quadratic) {
        const VirtualValues vv = inst.buyers() == 1 ? virtual_values_single(inst)
                                                    : virtual_values_multi(inst);
        const IronedVirtualValues ivv = iron(vv, inst);
        summary["regular"] = vv.regular;
        summary["ironing"] = ironing_to_json(vv, ivv);
    }

    const json mech_json = mechanism_to_json(mech);
    if (machine) {
        json j;
        j["mechanism"] = mech_json;
        j["summary"] = summary;
        emit(j, "");
        if (!out_path.empty()) write_json_file(out_path, mech_json);
        return exit_ok;
    }
    std::cout << "revenue: " << summary["revenue"].get<double>() << "\n";
    if (summary.contains("v_star")) {
        std::cout << "threshold value v*: " << summary["v_star"].get<double>()
                  << ", pays z_max w.p. " << summary["p_high"].get<double>() << "\n";
    }
    if (summary.contains("reserve_index")) {
        std::cout << "reserve index: " << summary["reserve_index"].dump() << "\n";
    }
    if (summary.contains("regular")) {
        std::cout << "regular: " << (summary["regular"].get<bool>() ? "yes" : "no");
        const auto& intervals = summary["ironing"]["intervals"];
        if (!intervals.empty()) std::cout << ", ironed intervals: " << intervals.dump();
        std::cout << "\n";
    }
    if (!out_path.empty()) {
        write_json_file(out_path, mech_json);
        std::cout << "mechanism written to " << out_path << "\n";
    } else {
        std::cout << to_json_text(mech_json) << "\n";
    }
    return exit_ok;
}

int cmd_verify(const std::string& instance_path, const std::string& mechanism_path,
               double tolerance, const std::string& out_path, bool machine) {
    const Instance inst = load_instance_file(instance_path);
    const AnyMechanism any = load_mechanism_file(mechanism_path);
    const DirectMechanism direct = std::visit(
        [&](const auto& m) -> DirectMechanism {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DirectMechanism>) {
                return m;
            } else {
                return to_direct(m, inst);
            }
        },
        any);

    const VerificationReport report = verify_direct(direct, inst, tolerance);
    json j = report_to_json(report);

    bool certified = true;
    if (inst.utility().kind == UtilityKind::Exponential) {
        if (inst.buyers() >= 2 && !check_assumption_a1(inst).ok) {
            j["certificate"] = nullptr;
            j["error"] = "assumption A1 fails; no dual certificate available";
            emit(j, out_path);
            return exit_assumption;
        }
        const DualCertificate cert = inst.buyers() == 1
                                         ? build_dual_certificate_single(inst)
                                         : build_dual_certificate_multi(inst);
        const DualFeasibilityReport dual = check_dual_feasibility(cert, inst, tolerance);
        const double gap = duality_gap(cert, report.revenue);
        j["certificate"] = {{"objective", cert.objective},
                            {"feasible", dual.feasible},
                            {"worst_slack", dual.worst_slack},
                            {"gap", gap}};
        certified = dual.feasible && std::abs(gap) <= tol::gap;
    } else {
        j["certificate"] = nullptr;  // dual machinery is exponential-only
    }

    if (!machine) {
        std::cout << "revenue: " << report.revenue << "\n"
                  << "BIC: " << (report.bic_ok ? "ok" : "FAIL")
                  << ", IR: " << (report.ir_ok ? "ok" : "FAIL")
                  << ", feasibility: " << (report.feasible_ok ? "ok" : "FAIL")
                  << " (worst violation " << report.worst_violation << ")\n";
        if (!j["certificate"].is_null()) {
            std::cout << "certificate objective: "
                      << j["certificate"]["objective"].get<double>()
                      << ", gap: " << j["certificate"]["gap"].get<double>()
                      << ", dual feasible: "
                      << (j["certificate"]["feasible"].get<bool>() ? "yes" : "no") << "\n";
        }
        if (!out_path.empty()) write_json_file(out_path, j);
    } else {
        emit(j, out_path);
    }
    return report.all_ok() && certified ? exit_ok : exit_verification;
}

int cmd_oracle(const std::string& instance_path, bool machine) {
    const Instance inst = load_instance_file(instance_path);
    const OracleResult oracle = optimal_revenue_oracle(inst);

    std::optional<double> closed_form;
    if (inst.buyers() == 1) {
        closed_form = optimal_posted_price(inst).revenue;
    } else if (inst.utility().kind == UtilityKind::Exponential &&
               check_assumption_a1(inst).ok) {
        closed_form = loser_pay_auction(inst).revenue;
    }

    bool match = true;
    json j;
    j["oracle_revenue"] = oracle.revenue;
    if (closed_form) {
        const double scale = std::max({1.0, std::abs(*closed_form), std::abs(oracle.revenue)});
        match = std::abs(oracle.revenue - *closed_form) <= 1e-7 * scale;
        j["closed_form_revenue"] = *closed_form;
        j["match"] = match;
    } else {
        j["closed_form_revenue"] = nullptr;
    }
    if (machine) {
        emit(j, "");
    } else {
        std::cout << "oracle revenue: " << oracle.revenue << "\n";
        if (closed_form) {
            std::cout << "closed form:    " << *closed_form
                      << (match ? " (matches within 1e-7)" : " (MISMATCH)") << "\n";
        } else {
            std::cout << "no closed form applies to this instance\n";
        }
    }
    return match ? exit_ok : exit_verification;
}

int cmd_iron(const std::string& instance_path) {
    const Instance inst = load_instance_file(instance_path);
    const VirtualValues vv =
        inst.buyers() == 1 ? virtual_values_single(inst) : virtual_values_multi(inst);
    const IronedVirtualValues ivv = iron(vv, inst);
    emit(ironing_to_json(vv, ivv), "");
    return exit_ok;
}

int cmd_counterexample(bool machine) {
    // One risk-loving buyer with quadratic utility (x+1)^2 - 1, ten uniform
    // values 0..0.9 and payments {0, 1}: a two-option menu strictly beats the
    // best randomized take-it-or-leave-it price.
    std::vector<double> values(10);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = 0.1 * static_cast<double>(k);
    const Instance inst(values, std::vector<double>(10, 0.1), {0.0, 1.0}, 1,
                        Utility::quadratic(1.0));

    const PostedPriceMechanism tioli = optimal_posted_price(inst);
    const MenuMechanism menu = menu_mechanism_revenue(
        {MenuOption{1.0 / 1.96, 0.0, 1.0}, MenuOption{1.0, 1536.0 / 2695.0, 0.0}}, inst);

    json j;
    j["tioli"] = mechanism_to_json(tioli);
    j["menu"] = mechanism_to_json(menu);
    j["menu_minus_tioli"] = menu.revenue - tioli.revenue;
    if (machine) {
        emit(j, "");
    } else {
        std::cout << "optimal take-it-or-leave-it revenue: " << tioli.revenue
                  << " (threshold " << tioli.threshold_value << ", p_high "
                  << tioli.pay_high_prob << ")\n";
        std::cout << "two-option menu revenue:             " << menu.revenue << "\n";
        std::cout << "per-value menu choice (null/1/2):    ";
        for (const auto& choice : menu.choice) {
            std::cout << (choice ? std::to_string(*choice + 1) : std::string("-"));
        }
        std::cout << "\nmenu - tioli = " << menu.revenue - tioli.revenue << "\n";
    }
    return menu.revenue > tioli.revenue ? exit_ok : exit_verification;
}

int cmd_simulate(const std::string& instance_path, const std::string& mechanism_path,
                 std::size_t samples, std::uint64_t seed, bool machine) {
    const Instance inst = load_instance_file(instance_path);
    const AnyMechanism mech = load_mechanism_file(mechanism_path);
    const SimulationResult sim = simulate_mechanism(mech, inst, samples, seed);
    const double analytic = std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DirectMechanism>) {
                return expected_revenue(m, inst);
            } else {
                return m.revenue;
            }
        },
        mech);

    json j;
    j["mean_revenue"] = sim.mean_revenue;
    j["std_error"] = sim.std_error;
    j["samples"] = sim.samples;
    j["seed"] = sim.seed;
    j["analytic_revenue"] = analytic;
    if (machine) {
        emit(j, "");
    } else {
        std::cout << "simulated revenue: " << sim.mean_revenue << " +/- " << sim.std_error
                  << " (" << samples << " samples, seed " << seed << ")\n"
                  << "analytic revenue:  " << analytic << "\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal auctions for risk-loving buyers on discrete grids"};
    app.require_subcommand(1);

    std::string instance_path, mechanism_path, out_path;
    double tolerance = tol::prob;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    bool machine = false;
    app.add_flag("--json", machine, "machine-readable output only");

    auto* solve = app.add_subcommand("solve", "compute the optimal mechanism");
    solve->add_option("--instance", instance_path, "instance JSON file")->required();
    solve->add_option("--out", out_path, "write the mechanism JSON here");

    auto* verify = app.add_subcommand("verify", "check a mechanism and its certificate");
    verify->add_option("--instance", instance_path, "instance JSON file")->required();
    verify->add_option("--mechanism", mechanism_path, "mechanism JSON file")->required();
    verify->add_option("--tolerance", tolerance, "constraint tolerance (default 1e-9)");
    verify->add_option("--out", out_path, "write the report JSON here");

    auto* oracle = app.add_subcommand("oracle", "LP brute-force optimal revenue");
    oracle->add_option("--instance", instance_path, "instance JSON file")->required();

    auto* iron_cmd = app.add_subcommand("iron", "virtual values and ironing");
    iron_cmd->add_option("--instance", instance_path, "instance JSON file")->required();

    app.add_subcommand("counterexample",
                       "quadratic-utility instance where a menu beats every "
                       "take-it-or-leave-it price");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo revenue estimate");
    simulate->add_option("--instance", instance_path, "instance JSON file")->required();
    simulate->add_option("--mechanism", mechanism_path, "mechanism JSON file")->required();
    simulate->add_option("--samples", samples, "number of samples (default 100000)");
    simulate->add_option("--seed", seed, "RNG seed (default 0)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("solve")) return cmd_solve(instance_path, out_path, machine);
        if (app.got_subcommand("verify")) {
            return cmd_verify(instance_path, mechanism_path, tolerance, out_path, machine);
        }
        if (app.got_subcommand("oracle")) return cmd_oracle(instance_path, machine);
        if (app.got_subcommand("iron")) return cmd_iron(instance_path);
        if (app.got_subcommand("counterexample")) return cmd_counterexample(machine);
        if (app.got_subcommand("simulate")) {
            return cmd_simulate(instance_path, mechanism_path, samples, seed, machine);
        }
    } catch (const A1ViolationError& err) {
        json j;
        j["error"] = err.what();
        j["a1"] = a1_report_to_json(err.report());
        std::cout << to_json_text(j) << "\n";
        return exit_assumption;
    } catch (const ParseError& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return exit_input;
    } catch (const std::invalid_argument& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return exit_input;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_input;
    }
    return exit_input;
}
