#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rlauction/json_io.hpp"
#include "rlauction/lp_oracle.hpp"
#include "rlauction/mechanisms.hpp"
#include "rlauction/simulate.hpp"
#include "rlauction/verify.hpp"
#include "rlauction/virtual_values.hpp"

namespace py = pybind11;
using namespace rlauction;

namespace {

Utility utility_from_kwargs(const std::string& kind, double alpha, double beta,
                            double slope, double shift) {
    if (kind == "exponential") return Utility::exponential(alpha, beta);
    if (kind == "linear") return Utility::linear(slope);
    if (kind == "quadratic") return Utility::quadratic(shift, beta);
    throw std::invalid_argument("unknown utility kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Optimal single-item auctions for risk-loving buyers on discrete grids";

    py::class_<Utility>(m, "Utility")
        .def(py::init(&utility_from_kwargs), py::arg("kind"), py::arg("alpha") = 1.0,
             py::arg("beta") = 1.0, py::arg("slope") = 1.0, py::arg("L") = 0.0)
        .def_static("exponential", &Utility::exponential, py::arg("alpha"),
                    py::arg("beta") = 1.0)
        .def_static("linear", &Utility::linear, py::arg("slope") = 1.0)
        .def_static("quadratic", &Utility::quadratic, py::arg("L"), py::arg("beta") = 1.0)
        .def_property_readonly("kind", [](const Utility& u) { return to_string(u.kind); })
        .def_readonly("alpha", &Utility::alpha)
        .def_readonly("beta", &Utility::beta)
        .def("__call__", [](const Utility& u, double x) { return eval_utility(u, x); });

    m.def("eval_utility", &eval_utility, py::arg("utility"), py::arg("x"));
    m.def("acceptance_ratio", &acceptance_ratio, py::arg("utility"), py::arg("v"),
          py::arg("z_max"));

    py::class_<Instance>(m, "Instance")
        .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>, int,
                      Utility>(),
             py::arg("values"), py::arg("pmf"), py::arg("payments"), py::arg("n"),
             py::arg("utility"))
        .def_property_readonly("values", &Instance::values)
        .def_property_readonly("pmf", &Instance::pmf)
        .def_property_readonly("payments", &Instance::payments)
        .def_property_readonly("n", &Instance::buyers)
        .def_property_readonly("z_max", &Instance::z_max);

    py::class_<VirtualValues>(m, "VirtualValues")
        .def_readonly("phi", &VirtualValues::phi)
        .def_readonly("regular", &VirtualValues::regular);
    py::class_<IronedInterval>(m, "IronedInterval")
        .def_readonly("first", &IronedInterval::first)
        .def_readonly("last", &IronedInterval::last);
    py::class_<IronedVirtualValues>(m, "IronedVirtualValues")
        .def_readonly("phi", &IronedVirtualValues::phi)
        .def_readonly("intervals", &IronedVirtualValues::intervals)
        .def_readonly("reserve_index", &IronedVirtualValues::reserve_index);

    m.def("virtual_values_single", &virtual_values_single, py::arg("instance"));
    m.def("virtual_values_multi", &virtual_values_multi, py::arg("instance"));
    m.def("iron", &iron, py::arg("virtual_values"), py::arg("instance"));
    m.def("is_regular",
          [](const VirtualValues& vv) { return is_regular(vv); },
          py::arg("virtual_values"));
    m.def("is_regular",
          [](const std::vector<double>& phi) { return is_regular(phi); },
          py::arg("phi"));

    py::class_<PostedPriceMechanism>(m, "PostedPriceMechanism")
        .def_readonly("v_star", &PostedPriceMechanism::threshold_value)
        .def_readonly("v_star_index", &PostedPriceMechanism::threshold_index)
        .def_readonly("p_high", &PostedPriceMechanism::pay_high_prob)
        .def_readonly("revenue", &PostedPriceMechanism::revenue);
    py::class_<LoserPayMechanism>(m, "LoserPayMechanism")
        .def_readonly("x", &LoserPayMechanism::alloc)
        .def_readonly("q", &LoserPayMechanism::lose_pay)
        .def_readonly("reserve_index", &LoserPayMechanism::reserve_index)
        .def_readonly("phi_ironed", &LoserPayMechanism::ranking)
        .def_readonly("revenue", &LoserPayMechanism::revenue);
    py::class_<MenuOption>(m, "MenuOption")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("w1"),
             py::arg("w0"))
        .def_readonly("x", &MenuOption::alloc)
        .def_readonly("w1", &MenuOption::win_pay_prob)
        .def_readonly("w0", &MenuOption::lose_pay_prob);
    py::class_<MenuMechanism>(m, "MenuMechanism")
        .def_readonly("options", &MenuMechanism::options)
        .def_readonly("choice", &MenuMechanism::choice)
        .def_readonly("revenue", &MenuMechanism::revenue);
    py::class_<DirectMechanism>(m, "DirectMechanism")
        .def_readonly("n", &DirectMechanism::buyers)
        .def_readonly("K", &DirectMechanism::num_values)
        .def_readonly("M", &DirectMechanism::num_payments)
        .def_readonly("y0", &DirectMechanism::y0)
        .def_readonly("y1", &DirectMechanism::y1);

    m.def("posted_price_revenue", &posted_price_revenue, py::arg("instance"), py::arg("v"));
    m.def("optimal_posted_price", &optimal_posted_price, py::arg("instance"));
    m.def("loser_pay_auction", &loser_pay_auction, py::arg("instance"));
    m.def("utility_curve", &utility_curve, py::arg("mechanism"), py::arg("instance"),
          py::arg("bid_index"), py::arg("v"));
    m.def("menu_utility", &menu_utility, py::arg("option"), py::arg("utility"),
          py::arg("z_max"), py::arg("v"));
    m.def("menu_mechanism_revenue", &menu_mechanism_revenue, py::arg("options"),
          py::arg("instance"));

    py::class_<A1Check>(m, "A1Check")
        .def_readonly("value", &A1Check::value)
        .def_readonly("lhs", &A1Check::lhs)
        .def_readonly("rhs", &A1Check::rhs)
        .def_readonly("ok", &A1Check::ok);
    py::class_<A1Report>(m, "A1Report")
        .def_readonly("per_value", &A1Report::per_value)
        .def_readonly("ok", &A1Report::ok);
    m.def("check_assumption_a1", &check_assumption_a1, py::arg("instance"));

    m.def("to_direct",
          [](const PostedPriceMechanism& mech, const Instance& inst) {
              return to_direct(mech, inst);
          });
    m.def("to_direct", [](const LoserPayMechanism& mech, const Instance& inst) {
        return to_direct(mech, inst);
    });
    m.def("to_direct", [](const MenuMechanism& mech, const Instance& inst) {
        return to_direct(mech, inst);
    });

    py::class_<CheckIssue>(m, "CheckIssue")
        .def_readonly("what", &CheckIssue::what)
        .def_readonly("violation", &CheckIssue::violation);
    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("bic_ok", &VerificationReport::bic_ok)
        .def_readonly("ir_ok", &VerificationReport::ir_ok)
        .def_readonly("feasible_ok", &VerificationReport::feasible_ok)
        .def_readonly("worst_violation", &VerificationReport::worst_violation)
        .def_readonly("revenue", &VerificationReport::revenue)
        .def_readonly("issues", &VerificationReport::issues)
        .def("all_ok", &VerificationReport::all_ok);

    m.def("check_bic", &check_bic, py::arg("mechanism"), py::arg("instance"),
          py::arg("tolerance") = tol::prob);
    m.def("check_ir", &check_ir, py::arg("mechanism"), py::arg("instance"),
          py::arg("tolerance") = tol::prob);
    m.def("check_feasibility", &check_feasibility, py::arg("mechanism"),
          py::arg("instance"), py::arg("tolerance") = tol::prob);
    m.def("expected_revenue", &expected_revenue, py::arg("mechanism"), py::arg("instance"));
    m.def("verify_direct", &verify_direct, py::arg("mechanism"), py::arg("instance"),
          py::arg("tolerance") = tol::prob);

    py::class_<DualCertificate>(m, "DualCertificate")
        .def_readonly("objective", &DualCertificate::objective)
        .def_readonly("lambda_", &DualCertificate::lambda)
        .def_readonly("mu", &DualCertificate::mu)
        .def_readonly("nu", &DualCertificate::nu)
        .def_readonly("gamma", &DualCertificate::gamma);
    py::class_<DualFeasibilityReport>(m, "DualFeasibilityReport")
        .def_readonly("feasible", &DualFeasibilityReport::feasible)
        .def_readonly("worst_slack", &DualFeasibilityReport::worst_slack)
        .def_readonly("worst_constraint", &DualFeasibilityReport::worst_constraint);

    m.def("build_dual_certificate_single", &build_dual_certificate_single,
          py::arg("instance"));
    m.def("build_dual_certificate_multi", &build_dual_certificate_multi,
          py::arg("instance"));
    m.def("check_dual_feasibility", &check_dual_feasibility, py::arg("certificate"),
          py::arg("instance"), py::arg("tolerance") = tol::prob);
    m.def("duality_gap", &duality_gap, py::arg("certificate"),
          py::arg("mechanism_revenue"));
    m.def(
        "dual_gamma",
        [](const DualCertificate& cert, const Instance& inst, int buyer, std::size_t k,
           double z) { return dual_gamma(cert, inst, buyer, k, z); },
        py::arg("certificate"), py::arg("instance"), py::arg("buyer"), py::arg("k"),
        py::arg("z"));
    m.def(
        "dual_pi",
        [](const DualCertificate& cert, const Instance& inst, int buyer, std::size_t k,
           double z) { return dual_pi(cert, inst, buyer, k, z); },
        py::arg("certificate"), py::arg("instance"), py::arg("buyer"), py::arg("k"),
        py::arg("z"));

    py::class_<DualShapeReport>(m, "DualShapeReport")
        .def_readonly("a_coeff", &DualShapeReport::a_coeff)
        .def_readonly("b_coeff", &DualShapeReport::b_coeff)
        .def_property_readonly("gamma_shape",
                               [](const DualShapeReport& r) {
                                   return r.gamma_shape == DualShape::StronglyConvex
                                              ? "strongly_convex"
                                              : "increasing";
                               })
        .def_property_readonly("pi_shape", [](const DualShapeReport& r) {
            return r.pi_shape == DualShape::StronglyConvex ? "strongly_convex"
                                                           : "increasing";
        });
    m.def("classify_dual_shape", &classify_dual_shape, py::arg("certificate"),
          py::arg("instance"), py::arg("buyer"), py::arg("k"));

    py::class_<LPModel>(m, "LPModel")
        .def_property_readonly(
            "num_vars", [](const LPModel& lp) { return lp.model.num_vars(); })
        .def_property_readonly(
            "num_rows", [](const LPModel& lp) { return lp.model.rows.size(); })
        .def_property_readonly("rows", [](const LPModel& lp) {
            std::vector<std::string> out;
            out.reserve(lp.row_refs.size());
            for (const auto& ref : lp.row_refs) out.push_back(ref.describe());
            return out;
        });
    m.def("build_primal_lp", &build_primal_lp, py::arg("instance"));
    m.def(
        "solve_lp",
        [](const LPModel& lp) {
            const lp::Solution solution = solve_lp(lp);
            return py::make_tuple(lp::to_string(solution.status), solution.objective,
                                  solution.iterations);
        },
        py::arg("model"));

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("revenue", &OracleResult::revenue)
        .def_readonly("mechanism", &OracleResult::mechanism);
    m.def("optimal_revenue_oracle", &optimal_revenue_oracle, py::arg("instance"));

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("mean_revenue", &SimulationResult::mean_revenue)
        .def_readonly("std_error", &SimulationResult::std_error)
        .def_readonly("samples", &SimulationResult::samples)
        .def_readonly("seed", &SimulationResult::seed);
    m.def(
        "simulate_mechanism",
        [](const py::object& mech, const Instance& inst, std::size_t samples,
           std::uint64_t seed) {
            AnyMechanism any;
            if (py::isinstance<PostedPriceMechanism>(mech)) {
                any = mech.cast<PostedPriceMechanism>();
            } else if (py::isinstance<LoserPayMechanism>(mech)) {
                any = mech.cast<LoserPayMechanism>();
            } else if (py::isinstance<MenuMechanism>(mech)) {
                any = mech.cast<MenuMechanism>();
            } else {
                any = mech.cast<DirectMechanism>();
            }
            return simulate_mechanism(any, inst, samples, seed);
        },
        py::arg("mechanism"), py::arg("instance"), py::arg("samples") = 100000,
        py::arg("seed") = 0);

    m.def("instance_from_json_text", [](const std::string& text) {
        return instance_from_json(nlohmann::json::parse(text));
    });
    m.def("instance_to_json_text",
          [](const Instance& inst) { return to_json_text(instance_to_json(inst)); });

    py::register_exception<A1ViolationError>(m, "A1ViolationError");
    py::register_exception<ParseError>(m, "ParseError");
}
