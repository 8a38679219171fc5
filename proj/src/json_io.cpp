#include "rlauction/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rlauction {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const char* key, const char* context) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string(context) + ": missing field '" + key + "'");
    }
    return *it;
}

double require_number(const json& j, const char* key, const char* context) {
    const json& field = require_field(j, key, context);
    if (!field.is_number()) {
        throw ParseError(std::string(context) + ": field '" + key + "' must be a number");
    }
    return field.get<double>();
}

std::vector<double> require_numbers(const json& j, const char* key, const char* context) {
    const json& field = require_field(j, key, context);
    if (!field.is_array()) {
        throw ParseError(std::string(context) + ": field '" + key + "' must be an array");
    }
    std::vector<double> out;
    out.reserve(field.size());
    for (const auto& entry : field) {
        if (!entry.is_number()) {
            throw ParseError(std::string(context) + ": field '" + key +
                             "' must contain numbers only");
        }
        out.push_back(entry.get<double>());
    }
    return out;
}

Utility utility_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("utility: must be an object");
    const json& kind = require_field(j, "kind", "utility");
    if (!kind.is_string()) throw ParseError("utility: field 'kind' must be a string");
    const std::string name = kind.get<std::string>();
    const double beta = j.contains("beta") ? require_number(j, "beta", "utility") : 1.0;
    try {
        if (name == "exponential") {
            return Utility::exponential(require_number(j, "alpha", "utility"), beta);
        }
        if (name == "linear") {
            const double slope =
                j.contains("slope") ? require_number(j, "slope", "utility") : 1.0;
            return Utility::linear(slope);
        }
        if (name == "quadratic") {
            return Utility::quadratic(require_number(j, "L", "utility"), beta);
        }
    } catch (const std::invalid_argument& err) {
        throw ParseError(std::string("utility: ") + err.what());
    }
    throw ParseError("utility: unknown kind '" + name + "'");
}

json utility_to_json(const Utility& u) {
    json j;
    j["kind"] = to_string(u.kind);
    switch (u.kind) {
        case UtilityKind::Exponential:
            j["alpha"] = u.alpha;
            j["beta"] = u.beta;
            break;
        case UtilityKind::Linear:
            j["slope"] = u.slope;
            break;
        case UtilityKind::Quadratic:
            j["L"] = u.shift;
            j["beta"] = u.beta;
            break;
    }
    return j;
}

json optional_index_to_json(const std::optional<std::size_t>& index) {
    if (!index) return nullptr;
    return *index + 1;  // 1-based in files and reports
}

std::optional<std::size_t> optional_index_from_json(const json& j, const char* context) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_number_integer() || j.get<long long>() < 1) {
        throw ParseError(std::string(context) + ": index must be a positive integer or null");
    }
    return static_cast<std::size_t>(j.get<long long>() - 1);
}

}  // namespace

Instance instance_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("instance: must be an object");
    std::vector<double> values = require_numbers(j, "values", "instance");
    std::vector<double> pmf = require_numbers(j, "pmf", "instance");

    std::vector<double> payments;
    if (j.contains("payments")) {
        payments = require_numbers(j, "payments", "instance");
    } else if (j.contains("z_max")) {
        const double z_max = require_number(j, "z_max", "instance");
        const double grid = j.contains("grid_size")
                                ? require_number(j, "grid_size", "instance")
                                : 2.0;
        const auto m = static_cast<std::size_t>(grid);
        if (m < 2 || static_cast<double>(m) != grid) {
            throw ParseError("instance: grid_size must be an integer >= 2");
        }
        payments.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            payments[i] = z_max * static_cast<double>(i) / static_cast<double>(m - 1);
        }
    } else {
        throw ParseError("instance: needs either 'payments' or 'z_max'");
    }

    const double n = require_number(j, "n", "instance");
    if (n < 1 || n != std::floor(n)) {
        throw ParseError("instance: 'n' must be a positive integer");
    }
    const Utility utility = utility_from_json(require_field(j, "utility", "instance"));
    try {
        return Instance(std::move(values), std::move(pmf), std::move(payments),
                        static_cast<int>(n), utility);
    } catch (const std::invalid_argument& err) {
        throw ParseError(err.what());
    }
}

json instance_to_json(const Instance& inst) {
    json j;
    j["values"] = inst.values();
    j["pmf"] = inst.pmf();
    j["payments"] = inst.payments();
    j["n"] = inst.buyers();
    j["utility"] = utility_to_json(inst.utility());
    return j;
}

AnyMechanism mechanism_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("mechanism: must be an object");
    const json& type = require_field(j, "type", "mechanism");
    if (!type.is_string()) throw ParseError("mechanism: field 'type' must be a string");
    const std::string name = type.get<std::string>();

    if (name == "posted_price") {
        PostedPriceMechanism mech;
        mech.threshold_value = require_number(j, "v_star", "posted_price");
        const auto index = optional_index_from_json(
            require_field(j, "v_star_index", "posted_price"), "posted_price.v_star_index");
        if (!index) throw ParseError("posted_price: v_star_index cannot be null");
        mech.threshold_index = *index;
        mech.pay_high_prob = require_number(j, "p_high", "posted_price");
        mech.revenue = require_number(j, "revenue", "posted_price");
        return mech;
    }
    if (name == "loser_pay") {
        LoserPayMechanism mech;
        mech.alloc = require_numbers(j, "x", "loser_pay");
        mech.lose_pay = require_numbers(j, "q", "loser_pay");
        mech.ranking = require_numbers(j, "phi_ironed", "loser_pay");
        mech.reserve_index = optional_index_from_json(
            require_field(j, "reserve_index", "loser_pay"), "loser_pay.reserve_index");
        mech.revenue = require_number(j, "revenue", "loser_pay");
        if (mech.alloc.size() != mech.lose_pay.size() ||
            mech.alloc.size() != mech.ranking.size()) {
            throw ParseError("loser_pay: x, q, phi_ironed must have equal length");
        }
        return mech;
    }
    if (name == "menu") {
        MenuMechanism mech;
        const json& options = require_field(j, "options", "menu");
        if (!options.is_array()) throw ParseError("menu: 'options' must be an array");
        for (const auto& option : options) {
            MenuOption o;
            o.alloc = require_number(option, "x", "menu option");
            o.win_pay_prob = require_number(option, "w1", "menu option");
            o.lose_pay_prob = require_number(option, "w0", "menu option");
            mech.options.push_back(o);
        }
        const json& choice = require_field(j, "choice", "menu");
        if (!choice.is_array()) throw ParseError("menu: 'choice' must be an array");
        for (const auto& c : choice) {
            mech.choice.push_back(optional_index_from_json(c, "menu.choice"));
        }
        mech.revenue = require_number(j, "revenue", "menu");
        return mech;
    }
    if (name == "direct") {
        DirectMechanism mech;
        const double n = require_number(j, "n", "direct");
        mech.buyers = static_cast<int>(n);
        mech.num_values = static_cast<std::size_t>(require_number(j, "K", "direct"));
        mech.num_payments = static_cast<std::size_t>(require_number(j, "M", "direct"));
        if (mech.buyers < 1 || mech.num_values < 1 || mech.num_payments < 1) {
            throw ParseError("direct: n, K, M must be positive");
        }
        mech.profiles = 1;
        for (int i = 0; i < mech.buyers; ++i) mech.profiles *= mech.num_values;
        mech.y0 = require_numbers(j, "y0", "direct");
        mech.y1 = require_numbers(j, "y1", "direct");
        const std::size_t expected =
            static_cast<std::size_t>(mech.buyers) * mech.num_payments * mech.profiles;
        if (mech.y0.size() != expected || mech.y1.size() != expected) {
            std::ostringstream msg;
            msg << "direct: y0/y1 must have n*M*K^n = " << expected << " entries";
            throw ParseError(msg.str());
        }
        return mech;
    }
    throw ParseError("mechanism: unknown type '" + name + "'");
}

json mechanism_to_json(const AnyMechanism& mech) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            json j;
            if constexpr (std::is_same_v<T, PostedPriceMechanism>) {
                j["type"] = "posted_price";
                j["v_star"] = m.threshold_value;
                j["v_star_index"] = m.threshold_index + 1;
                j["p_high"] = m.pay_high_prob;
                j["revenue"] = m.revenue;
            } else if constexpr (std::is_same_v<T, LoserPayMechanism>) {
                j["type"] = "loser_pay";
                j["x"] = m.alloc;
                j["q"] = m.lose_pay;
                j["phi_ironed"] = m.ranking;
                j["reserve_index"] = optional_index_to_json(m.reserve_index);
                j["revenue"] = m.revenue;
            } else if constexpr (std::is_same_v<T, MenuMechanism>) {
                j["type"] = "menu";
                j["options"] = json::array();
                for (const auto& option : m.options) {
                    j["options"].push_back({{"x", option.alloc},
                                            {"w1", option.win_pay_prob},
                                            {"w0", option.lose_pay_prob}});
                }
                j["choice"] = json::array();
                for (const auto& c : m.choice) j["choice"].push_back(optional_index_to_json(c));
                j["revenue"] = m.revenue;
            } else {
                j["type"] = "direct";
                j["n"] = m.buyers;
                j["K"] = m.num_values;
                j["M"] = m.num_payments;
                j["y0"] = m.y0;
                j["y1"] = m.y1;
            }
            return j;
        },
        mech);
}

json report_to_json(const VerificationReport& report) {
    json j;
    j["bic_ok"] = report.bic_ok;
    j["ir_ok"] = report.ir_ok;
    j["feasible_ok"] = report.feasible_ok;
    j["worst_violation"] = report.worst_violation;
    j["revenue"] = report.revenue;
    j["issues"] = json::array();
    for (const auto& issue : report.issues) {
        j["issues"].push_back({{"what", issue.what}, {"violation", issue.violation}});
    }
    return j;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& err) {
        throw ParseError("instance file " + path + ": " + err.what());
    }
    return instance_from_json(j);
}

AnyMechanism load_mechanism_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mechanism file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& err) {
        throw ParseError("mechanism file " + path + ": " + err.what());
    }
    return mechanism_from_json(j);
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << to_json_text(j) << "\n";
}

std::string to_json_text(const json& j) {
    // nlohmann serializes doubles with the shortest representation that
    // round-trips exactly, which meets the lossless requirement.
    return j.dump(2);
}

}  // namespace rlauction
