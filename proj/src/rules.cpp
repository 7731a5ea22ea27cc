#include "prophet/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "prophet/errors.hpp"

namespace prophet {

RuleSpec RuleSpec::deterministic(double tau) {
    if (!(std::isfinite(tau) && tau >= 0.0)) {
        throw std::invalid_argument("deterministic rule: tau must be finite and nonnegative");
    }
    RuleSpec r;
    r.kind_ = RuleKind::deterministic;
    r.tau_ = tau;
    return r;
}

RuleSpec RuleSpec::sample_max() {
    RuleSpec r;
    r.kind_ = RuleKind::sample_max;
    return r;
}

RuleSpec RuleSpec::inverse_cdf_max() {
    RuleSpec r;
    r.kind_ = RuleKind::inverse_cdf_max;
    return r;
}

RuleSpec RuleSpec::empirical(std::vector<double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("empirical rule: samples must be nonempty");
    }
    for (double s : samples) {
        if (!(std::isfinite(s) && s >= 0.0)) {
            throw std::invalid_argument("empirical rule: samples must be finite and nonnegative");
        }
    }
    RuleSpec r;
    r.kind_ = RuleKind::empirical;
    r.samples_ = std::move(samples);
    return r;
}

RuleSpec RuleSpec::mixture(double alpha, double base_tau) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("mixture rule: alpha must lie in [0, 1]");
    }
    if (!(std::isfinite(base_tau) && base_tau >= 0.0)) {
        throw std::invalid_argument("mixture rule: base_tau must be finite and nonnegative");
    }
    RuleSpec r;
    r.kind_ = RuleKind::mixture;
    r.alpha_ = alpha;
    r.tau_ = base_tau;
    return r;
}

ThresholdLaw threshold_law(const RuleSpec& rule) {
    ThresholdLaw law;
    switch (rule.kind()) {
        case RuleKind::deterministic:
            law.atoms.emplace_back(rule.tau(), 1.0);
            break;
        case RuleKind::sample_max:
        case RuleKind::inverse_cdf_max:
            law.max_law_weight = 1.0;
            break;
        case RuleKind::empirical: {
            std::map<double, double> merged;
            const double w = 1.0 / static_cast<double>(rule.samples().size());
            for (double s : rule.samples()) merged[s] += w;
            law.atoms.assign(merged.begin(), merged.end());
            break;
        }
        case RuleKind::mixture:
            law.max_law_weight = rule.alpha();
            if (rule.alpha() < 1.0) law.atoms.emplace_back(rule.base_tau(), 1.0 - rule.alpha());
            break;
    }
    return law;
}

std::vector<std::pair<double, double>> expand_law_atoms(const ThresholdLaw& law,
                                                        const Instance& inst) {
    std::map<double, double> merged;
    for (const auto& [t, w] : law.atoms) merged[t] += w;
    if (law.max_law_weight > 0.0) {
        if (!inst.all_finite_support()) {
            throw UnsupportedExactError(
                "threshold law places weight on the maximum of an instance with "
                "continuous items; no finite atom expansion exists");
        }
        for (const auto& [a, p] : inst.max_atoms()) merged[a] += law.max_law_weight * p;
    }
    return {merged.begin(), merged.end()};
}

}  // namespace prophet
