#include "prophet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "prophet/errors.hpp"

namespace prophet {

namespace {

Json report_frame(const CliOptions& opts, const Instance& inst) {
    Json doc;
    doc["tool"] = "prophet";
    doc["version"] = kVersion;
    doc["command"] = opts.command_echo;
    doc["instance_digest"] = instance_digest(inst);
    doc["seed"] = opts.seed;
    doc["results"] = Json::array();
    return doc;
}

std::set<std::string> parse_suite(const std::string& suite) {
    std::set<std::string> names;
    std::stringstream ss(suite);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) names.insert(item);
    }
    return names;
}

bool suite_has(const std::set<std::string>& names, const std::string& name) {
    return names.count("all") > 0 || names.count(name) > 0;
}

Json tagged(const char* type, Json body) {
    Json doc;
    doc["type"] = type;
    doc.update(body);
    return doc;
}

}  // namespace

int exit_code_for_exception(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e) != nullptr) return 2;
    if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return 2;
    if (dynamic_cast<const std::domain_error*>(&e) != nullptr) return 2;
    return 3;
}

CommandOutcome run_analyze(const CliOptions& opts) {
    const Instance inst = load_instance(opts.instance_path);
    CommandOutcome out;
    out.report = report_frame(opts, inst);

    const ThresholdSet ts = certified_interval(inst);
    Json thresholds = thresholds_to_json(ts);
    thresholds["expected_max"] = inst.expected_max();
    out.report["results"].push_back(tagged("thresholds", std::move(thresholds)));

    Json table;
    Json rows = Json::array();
    for (double tau : default_grid(inst)) {
        Json row;
        row["tau"] = tau;
        row["p_tau"] = inst.exceed_prob(tau);
        row["R_tau"] = inst.aggregate_surplus(tau);
        rows.push_back(std::move(row));
    }
    table["grid"] = std::move(rows);
    out.report["results"].push_back(tagged("tables", std::move(table)));
    return out;
}

CommandOutcome run_simulate(const CliOptions& opts) {
    const Instance inst = load_instance(opts.instance_path);
    const RuleSpec rule = load_rule(opts.rule_path);
    CommandOutcome out;
    out.report = report_frame(opts, inst);
    out.report["rule"] = rule_to_json(rule);

    const EvalResult mc =
        monte_carlo(inst, rule, opts.trials, opts.seed, opts.zgrid, opts.threads);
    out.report["results"].push_back(tagged("monte_carlo", eval_to_json(mc)));

    const EvalResult ref = evaluate_expectation(inst, rule);
    Json ref_json = eval_to_json(ref);
    const double tol = std::max(4.0 * mc.payoff_se, 1e-12);
    ref_json["agrees_with_monte_carlo"] =
        std::abs(ref.expected_payoff - mc.expected_payoff) <= tol;
    out.report["results"].push_back(tagged("reference", std::move(ref_json)));
    return out;
}

CommandOutcome run_certify(const CliOptions& opts) {
    const Instance inst = load_instance(opts.instance_path);
    const bool has_rule = !opts.rule_path.empty();
    CommandOutcome out;
    out.report = report_frame(opts, inst);

    CertifyOptions copts;
    copts.trials = opts.trials;
    copts.seed = opts.seed;
    copts.threads = opts.threads;
    copts.sweep_points = opts.points > 0 ? opts.points : 20;

    const std::set<std::string> suite = parse_suite(opts.suite);
    std::vector<CertificateReport> reports;

    if (has_rule) {
        const RuleSpec rule = load_rule(opts.rule_path);
        out.report["rule"] = rule_to_json(rule);
        const ThresholdLaw law = threshold_law(rule);
        if (suite_has(suite, "decomposition")) {
            reports.push_back(check_decomposition(inst, rule, copts));
        }
        if (suite_has(suite, "half-ratio")) {
            reports.push_back(half_ratio_report(inst, rule, copts));
        }
        if (rule.kind() == RuleKind::deterministic) {
            if (suite_has(suite, "det-certificate")) {
                reports.push_back(check_deterministic_certificate(inst, rule.tau()));
            }
            if (suite_has(suite, "factored-certificate")) {
                reports.push_back(check_factored_certificate(inst, rule.tau()));
            }
        }
        if (suite_has(suite, "surplus-identity")) {
            reports.push_back(check_averaged_surplus_identity(inst, rule, copts));
        }
        if (suite_has(suite, "reach-condition")) {
            reports.push_back(check_averaged_reach_condition(inst, law, opts.zgrid));
        }
        if (suite_has(suite, "threshold-condition")) {
            reports.push_back(check_threshold_part_condition(inst, law));
        }
        if ((rule.kind() == RuleKind::sample_max || rule.kind() == RuleKind::inverse_cdf_max) &&
            suite_has(suite, "tail-dominance")) {
            reports.push_back(check_tail_dominance(inst, rule, opts.zgrid, copts));
        }
    } else {
        const ThresholdSet ts = certified_interval(inst);
        if (suite_has(suite, "decomposition")) {
            reports.push_back(check_decomposition(inst, RuleSpec::sample_max(), copts));
        }
        if (suite_has(suite, "det-certificate")) {
            for (double tau : {ts.median, ts.half_mean, ts.balanced}) {
                reports.push_back(check_deterministic_certificate(inst, tau));
            }
        }
        if (suite_has(suite, "factored-certificate")) {
            for (double tau : {ts.median, ts.half_mean, ts.balanced}) {
                reports.push_back(check_factored_certificate(inst, tau));
            }
        }
        if (suite_has(suite, "fixed-point")) {
            reports.push_back(check_fixed_point_sandwich(inst));
        }
        if (suite_has(suite, "interval-guarantee")) {
            reports.push_back(check_interval_guarantee(inst, copts.sweep_points));
        }
        if (suite_has(suite, "max-law-bound")) {
            reports.push_back(check_max_law_surplus_bound(inst, copts));
        }
        if (suite_has(suite, "surplus-identity")) {
            reports.push_back(check_averaged_surplus_identity(inst, RuleSpec::sample_max(), copts));
        }
        ThresholdLaw max_law;
        max_law.max_law_weight = 1.0;
        if (suite_has(suite, "reach-condition")) {
            reports.push_back(check_averaged_reach_condition(inst, max_law, opts.zgrid));
        }
        if (suite_has(suite, "threshold-condition")) {
            reports.push_back(check_threshold_part_condition(inst, max_law));
        }
        if (suite_has(suite, "tail-dominance")) {
            reports.push_back(check_tail_dominance(inst, RuleSpec::sample_max(), opts.zgrid, copts));
        }
        if (suite_has(suite, "exchangeability")) {
            reports.push_back(check_exchangeability(inst, copts));
        }
        if (suite_has(suite, "half-ratio")) {
            reports.push_back(half_ratio_report(inst, RuleSpec::sample_max(), copts));
        }
    }

    bool all_passed = true;
    for (const CertificateReport& r : reports) {
        all_passed = all_passed && r.passed;
        out.report["results"].push_back(tagged("certificate", certificate_to_json(r)));
    }
    out.report["all_passed"] = all_passed;
    out.exit_code = all_passed ? 0 : 1;
    return out;
}

CommandOutcome run_sweep(const CliOptions& opts) {
    const Instance inst = load_instance(opts.instance_path);
    if (!(opts.tau_min <= opts.tau_max)) {
        throw std::domain_error("sweep: tau-min must not exceed tau-max");
    }
    const int points = opts.points > 0 ? opts.points : 101;
    if (points < 2) throw std::domain_error("sweep: points must be at least 2");

    CommandOutcome out;
    out.report = report_frame(opts, inst);

    const double em = inst.expected_max();
    const ThresholdSet ts = certified_interval(inst);

    std::ostringstream csv;
    csv << "tau,expected_payoff,threshold_part,surplus_part,p_tau,R_tau,ratio\n";
    double best_tau = opts.tau_min;
    double best_payoff = -1;
    for (int k = 0; k < points; ++k) {
        const double tau =
            opts.tau_min + (opts.tau_max - opts.tau_min) * static_cast<double>(k) / (points - 1);
        const EvalResult ev = evaluate_deterministic_with_ties(inst, tau);
        const double ratio = em > 0.0 ? ev.expected_payoff / em : 0.0;
        csv << format_double(tau) << ',' << format_double(ev.expected_payoff) << ','
            << format_double(ev.threshold_part) << ',' << format_double(ev.surplus_part) << ','
            << format_double(inst.exceed_prob(tau)) << ','
            << format_double(inst.aggregate_surplus(tau)) << ',' << format_double(ratio) << '\n';
        if (ev.expected_payoff > best_payoff) {
            best_payoff = ev.expected_payoff;
            best_tau = tau;
        }
    }
    out.csv = csv.str();

    Json summary;
    summary["argmax_tau"] = best_tau;
    summary["argmax_expected_payoff"] = best_payoff;
    summary["expected_max"] = em;
    const double lo = std::max(opts.tau_min, ts.certified_lo);
    const double hi = std::min(opts.tau_max, ts.certified_hi);
    if (lo <= hi) {
        summary["certified_lo"] = lo;
        summary["certified_hi"] = hi;
    } else {
        summary["certified_lo"] = nullptr;
        summary["certified_hi"] = nullptr;
    }
    out.report["results"].push_back(tagged("sweep_summary", std::move(summary)));
    return out;
}

}  // namespace prophet
