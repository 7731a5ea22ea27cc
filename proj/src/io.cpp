#include "prophet/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "prophet/errors.hpp"

namespace prophet {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

double get_number(const Json& doc, const std::string& path, const char* field) {
    if (!doc.contains(field)) fail(path + "." + field, "missing required field");
    const Json& v = doc.at(field);
    if (!v.is_number()) fail(path + "." + field, "expected a number");
    return v.get<double>();
}

std::vector<double> get_number_list(const Json& doc, const std::string& path, const char* field) {
    if (!doc.contains(field)) fail(path + "." + field, "missing required field");
    const Json& v = doc.at(field);
    if (!v.is_array()) fail(path + "." + field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const Json& e : v) {
        if (!e.is_number()) fail(path + "." + field, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string get_kind(const Json& doc, const std::string& path) {
    if (!doc.is_object()) fail(path, "expected an object");
    if (!doc.contains("kind")) fail(path + ".kind", "missing required field");
    if (!doc.at("kind").is_string()) fail(path + ".kind", "expected a string");
    return doc.at("kind").get<std::string>();
}

Distribution parse_distribution(const Json& doc, const std::string& path) {
    const std::string kind = get_kind(doc, path);
    try {
        if (kind == "point_mass") {
            return Distribution::point_mass(get_number(doc, path, "value"));
        }
        if (kind == "discrete") {
            return Distribution::discrete(get_number_list(doc, path, "support"),
                                          get_number_list(doc, path, "probs"));
        }
        if (kind == "uniform") {
            return Distribution::uniform(get_number(doc, path, "a"), get_number(doc, path, "b"));
        }
        if (kind == "exponential") {
            return Distribution::exponential(get_number(doc, path, "rate"));
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown distribution kind '" + kind + "'");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace

Instance parse_instance(const Json& doc) {
    if (!doc.is_object()) fail("instance", "expected an object");
    if (!doc.contains("items")) fail("instance.items", "missing required field");
    const Json& items = doc.at("items");
    if (!items.is_array() || items.empty()) {
        fail("instance.items", "expected a nonempty array");
    }
    std::vector<Distribution> dists;
    dists.reserve(items.size());
    for (std::size_t k = 0; k < items.size(); ++k) {
        std::ostringstream path;
        path << "instance.items[" << k << "]";
        dists.push_back(parse_distribution(items[k], path.str()));
    }
    return Instance(std::move(dists));
}

RuleSpec parse_rule(const Json& doc) {
    const std::string kind = get_kind(doc, "rule");
    try {
        if (kind == "deterministic") {
            return RuleSpec::deterministic(get_number(doc, "rule", "tau"));
        }
        if (kind == "sample_max") return RuleSpec::sample_max();
        if (kind == "inverse_cdf_max") return RuleSpec::inverse_cdf_max();
        if (kind == "empirical") {
            return RuleSpec::empirical(get_number_list(doc, "rule", "samples"));
        }
        if (kind == "mixture") {
            return RuleSpec::mixture(get_number(doc, "rule", "alpha"),
                                     get_number(doc, "rule", "base_tau"));
        }
    } catch (const std::invalid_argument& e) {
        fail("rule", e.what());
    }
    fail("rule.kind", "unknown rule kind '" + kind + "'");
}

Instance load_instance(const std::string& path) {
    return parse_instance(read_json_file(path));
}

RuleSpec load_rule(const std::string& path) {
    return parse_rule(read_json_file(path));
}

Json instance_to_json(const Instance& inst) {
    Json items = Json::array();
    for (const Distribution& d : inst.items()) {
        Json e;
        switch (d.kind()) {
            case DistKind::point_mass:
                e["kind"] = "point_mass";
                e["value"] = d.value();
                break;
            case DistKind::discrete:
                e["kind"] = "discrete";
                e["support"] = std::vector<double>(d.support().begin(), d.support().end());
                e["probs"] = std::vector<double>(d.probs().begin(), d.probs().end());
                break;
            case DistKind::uniform:
                e["kind"] = "uniform";
                e["a"] = d.lo();
                e["b"] = d.hi();
                break;
            case DistKind::exponential:
                e["kind"] = "exponential";
                e["rate"] = d.rate();
                break;
        }
        items.push_back(std::move(e));
    }
    Json doc;
    doc["items"] = std::move(items);
    return doc;
}

Json rule_to_json(const RuleSpec& rule) {
    Json doc;
    switch (rule.kind()) {
        case RuleKind::deterministic:
            doc["kind"] = "deterministic";
            doc["tau"] = rule.tau();
            break;
        case RuleKind::sample_max:
            doc["kind"] = "sample_max";
            break;
        case RuleKind::inverse_cdf_max:
            doc["kind"] = "inverse_cdf_max";
            break;
        case RuleKind::empirical:
            doc["kind"] = "empirical";
            doc["samples"] = std::vector<double>(rule.samples().begin(), rule.samples().end());
            break;
        case RuleKind::mixture:
            doc["kind"] = "mixture";
            doc["alpha"] = rule.alpha();
            doc["base_tau"] = rule.base_tau();
            break;
    }
    return doc;
}

std::string instance_digest(const Instance& inst) {
    const std::string canon = instance_to_json(inst).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << h;
    return out.str();
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

const char* method_name(EvalMethod m) {
    switch (m) {
        case EvalMethod::enumeration: return "enumeration";
        case EvalMethod::closed_form: return "closed_form";
        case EvalMethod::quadrature: return "quadrature";
        case EvalMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

const char* method_name(CheckMethod m) {
    switch (m) {
        case CheckMethod::exact: return "exact";
        case CheckMethod::quadrature: return "quadrature";
        case CheckMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

}  // namespace

Json eval_to_json(const EvalResult& r) {
    Json doc;
    doc["method"] = method_name(r.method);
    doc["expected_payoff"] = r.expected_payoff;
    doc["threshold_part"] = r.threshold_part;
    doc["surplus_part"] = r.surplus_part;
    if (r.method == EvalMethod::monte_carlo) {
        doc["trials"] = r.trials;
        doc["payoff_se"] = r.payoff_se;
        doc["threshold_se"] = r.threshold_se;
        doc["surplus_se"] = r.surplus_se;
    } else {
        doc["trials"] = "exact";
    }
    if (!r.tail.empty()) {
        Json tail = Json::array();
        for (const TailPoint& t : r.tail) {
            Json e;
            e["z"] = t.z;
            e["prob"] = t.prob;
            if (r.method == EvalMethod::monte_carlo) e["se"] = t.se;
            tail.push_back(std::move(e));
        }
        doc["tail"] = std::move(tail);
    }
    if (!r.payoff_pmf.empty()) {
        Json pmf = Json::array();
        for (const auto& [value, prob] : r.payoff_pmf) {
            Json e;
            e["value"] = value;
            e["prob"] = prob;
            pmf.push_back(std::move(e));
        }
        doc["payoff_pmf"] = std::move(pmf);
    }
    return doc;
}

Json certificate_to_json(const CertificateReport& r) {
    Json doc;
    doc["name"] = r.name;
    doc["lhs"] = r.lhs;
    doc["rhs"] = r.rhs;
    doc["margin"] = r.margin;
    doc["tolerance"] = r.tolerance;
    doc["passed"] = r.passed;
    doc["method"] = method_name(r.method);
    if (r.worst_x) doc["worst_x"] = *r.worst_x;
    if (r.worst_item) doc["worst_item"] = *r.worst_item;
    if (r.method == CheckMethod::monte_carlo) {
        doc["se"] = r.se;
        doc["trials"] = r.trials;
        doc["seed"] = r.seed;
    }
    if (!r.note.empty()) doc["note"] = r.note;
    for (const auto& [key, value] : r.extras) doc[key] = value;
    return doc;
}

Json thresholds_to_json(const ThresholdSet& t) {
    Json doc;
    doc["half_mean"] = t.half_mean;
    doc["median"] = t.median;
    doc["median_is_exact"] = t.median_is_exact;
    doc["balanced"] = t.balanced;
    doc["certified_lo"] = t.certified_lo;
    doc["certified_hi"] = t.certified_hi;
    return doc;
}

}  // namespace prophet
