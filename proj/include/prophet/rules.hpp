#pragma once

#include <span>
#include <utility>
#include <vector>

#include "prophet/instance.hpp"

namespace prophet {

enum class RuleKind { deterministic, sample_max, inverse_cdf_max, empirical, mixture };

// A threshold stopping policy. The randomized kinds carry no fixed value:
// the threshold is drawn per run, independently of the scanned values.
//
//   deterministic    fixed tau
//   sample_max       max of one fresh sample per item
//   inverse_cdf_max  product-CDF quantile at a fresh uniform
//   empirical        uniform draw from stored past maxima
//   mixture          sample-from-the-maximum with probability alpha,
//                    otherwise a fixed base threshold
class RuleSpec {
public:
    static RuleSpec deterministic(double tau);
    static RuleSpec sample_max();
    static RuleSpec inverse_cdf_max();
    static RuleSpec empirical(std::vector<double> samples);
    static RuleSpec mixture(double alpha, double base_tau);

    RuleKind kind() const { return kind_; }
    double tau() const { return tau_; }
    double alpha() const { return alpha_; }
    double base_tau() const { return tau_; }
    std::span<const double> samples() const { return samples_; }

private:
    RuleSpec() = default;
    RuleKind kind_ = RuleKind::deterministic;
    double tau_ = 0;    // deterministic tau / mixture base
    double alpha_ = 0;  // mixture weight on the law of the maximum
    std::vector<double> samples_;
};

// Law of the drawn threshold, expressed as a convex combination of the law
// of the instance maximum and finitely many fixed atoms. Every rule kind
// reduces to this form, and all integrals against the law are linear in it.
struct ThresholdLaw {
    double max_law_weight = 0;
    std::vector<std::pair<double, double>> atoms;  // (value, weight), ascending
};

ThresholdLaw threshold_law(const RuleSpec& rule);

// Expands the law into a finite atom list. Requires a finite-support
// instance when the law places weight on the maximum.
std::vector<std::pair<double, double>> expand_law_atoms(const ThresholdLaw& law,
                                                        const Instance& inst);

}  // namespace prophet
