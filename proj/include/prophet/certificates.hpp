#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prophet/engine.hpp"
#include "prophet/instance.hpp"
#include "prophet/rules.hpp"
#include "prophet/thresholds.hpp"
#include "prophet/version.hpp"

namespace prophet {

enum class CheckMethod { exact, quadrature, monte_carlo };

// Verdict for one checked inequality or identity. Margins are oriented so
// that nonnegative means the relation holds; a report passes iff
// margin >= -tolerance.
struct CertificateReport {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double margin = 0;
    std::optional<double> worst_x;   // grid coordinate of the worst margin
    std::optional<int> worst_item;   // 1-based item index where relevant
    double tolerance = 0;
    bool passed = false;
    CheckMethod method = CheckMethod::exact;
    double se = 0;                   // Monte Carlo only
    std::uint64_t trials = 0;        // Monte Carlo only
    std::uint64_t seed = 0;          // Monte Carlo only
    std::string note;
    std::vector<std::pair<std::string, double>> extras;
};

struct CertifyOptions {
    std::uint64_t trials = 100000;
    std::uint64_t seed = kDefaultSeed;
    int sweep_points = 20;
    int threads = 1;
};

// Expected payoff splits into threshold part plus surplus part; checks the
// residual of the identity for the given rule.
CertificateReport check_decomposition(const Instance& inst, const RuleSpec& rule,
                                      const CertifyOptions& opts = {});

// E[payoff] >= p(tau) tau + (1 - p(tau)) R(tau) for a deterministic tau.
CertificateReport check_deterministic_certificate(const Instance& inst, double tau);

// E[payoff] >= half-mean + (1 - 2 p(tau)) (half-mean - tau); also reports
// the sign of the product term.
CertificateReport check_factored_certificate(const Instance& inst, double tau);

// At the balanced threshold: E[payoff] >= tau* and E[max] <= 2 tau*.
CertificateReport check_fixed_point_sandwich(const Instance& inst);

// Sweeps deterministic thresholds across the certified interval and reports
// the worst margin of E[payoff] - half of E[max].
CertificateReport check_interval_guarantee(const Instance& inst, int points);

// Surplus part of a randomized threshold with the given law, evaluated by
// the averaged-reach double integral: exact nested atom sums on finite
// instances, piecewise quadrature on the tail-level axis otherwise. At
// threshold atoms that collide with item atoms the reach is rank-averaged,
// matching the tie-broken engine.
double averaged_surplus(const Instance& inst, const ThresholdLaw& law,
                        std::span<const double> xgrid = {});

// Identity check: the averaged-surplus evaluation equals the engine's
// surplus part for the rule.
CertificateReport check_averaged_surplus_identity(const Instance& inst, const RuleSpec& rule,
                                                  const CertifyOptions& opts = {});

// For a threshold drawn from the law of the maximum: surplus part is at
// least half of E[(max - threshold)^+] for an independent identically
// distributed pair.
CertificateReport check_max_law_surplus_bound(const Instance& inst,
                                              const CertifyOptions& opts = {});

// Sufficient condition on the averaged reach: for every item i and grid
// level x, the law's averaged reach mass below x must be at least half of
// F(x) times the deterministic reach at x.
CertificateReport check_averaged_reach_condition(const Instance& inst, const ThresholdLaw& law,
                                                 std::span<const double> xgrid = {});

// Companion sufficient condition on the threshold part: the integral of
// t (1 - F(t)) against the law must be at least its value against the law
// of the maximum.
CertificateReport check_threshold_part_condition(const Instance& inst, const ThresholdLaw& law);

// Pointwise tail dominance for thresholds distributed as the maximum:
// P(payoff > z) >= half of P(max > z) at every grid level.
CertificateReport check_tail_dominance(const Instance& inst, const RuleSpec& rule,
                                       std::span<const double> zgrid = {},
                                       const CertifyOptions& opts = {});

// For an independent identically distributed pair (M, T) with ties weighted
// one half: E[(M + T) 1{M > T}] equals E[M].
CertificateReport check_exchangeability(const Instance& inst, const CertifyOptions& opts = {});

// E[payoff] versus half of E[max] for any rule.
CertificateReport half_ratio_report(const Instance& inst, const RuleSpec& rule,
                                    const CertifyOptions& opts = {});

}  // namespace prophet
