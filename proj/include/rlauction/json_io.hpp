#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rlauction/instance.hpp"
#include "rlauction/simulate.hpp"
#include "rlauction/verify.hpp"

namespace rlauction {

/// Raised on malformed input files; the message names the offending field.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Instance files carry: values, pmf, payments (or the {z_max, grid_size}
/// shorthand for an evenly spaced grid from 0), n, and a utility object
/// ({"kind": "exponential", "alpha": ..., "beta": ...} — beta defaults to 1;
/// "linear" with optional slope; "quadratic" with L and optional beta).
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

/// Mechanism files are discriminated by "type": posted_price | loser_pay |
/// menu | direct.  Value/payment indices are serialized 1-based to match the
/// grid numbering used in reports.
AnyMechanism mechanism_from_json(const nlohmann::json& j);
nlohmann::json mechanism_to_json(const AnyMechanism& mech);

nlohmann::json report_to_json(const VerificationReport& report);

Instance load_instance_file(const std::string& path);
AnyMechanism load_mechanism_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// Serialize with enough digits that parsing returns bit-identical doubles.
std::string to_json_text(const nlohmann::json& j);

}  // namespace rlauction
