#pragma once

#include <string>

#include <json.hpp>

#include "prophet/certificates.hpp"
#include "prophet/engine.hpp"
#include "prophet/instance.hpp"
#include "prophet/rules.hpp"
#include "prophet/thresholds.hpp"

namespace prophet {

using Json = nlohmann::ordered_json;

// Instance and rule documents are JSON. An instance is
//   {"items": [{"kind": "point_mass", "value": 1.0}, ...]}
// with kinds point_mass, discrete (support/probs), uniform (a/b) and
// exponential (rate). A rule is a single object such as
//   {"kind": "deterministic", "tau": 0.5}
// with kinds deterministic, sample_max, inverse_cdf_max, empirical
// (samples) and mixture (alpha/base_tau). Unknown kinds and fields with the
// wrong shape are rejected with the offending path in the message.
Instance parse_instance(const Json& doc);
RuleSpec parse_rule(const Json& doc);
Instance load_instance(const std::string& path);
RuleSpec load_rule(const std::string& path);

Json instance_to_json(const Instance& inst);
Json rule_to_json(const RuleSpec& rule);

// FNV-1a hash of the canonical instance serialization.
std::string instance_digest(const Instance& inst);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

Json eval_to_json(const EvalResult& r);
Json certificate_to_json(const CertificateReport& r);
Json thresholds_to_json(const ThresholdSet& t);

}  // namespace prophet
