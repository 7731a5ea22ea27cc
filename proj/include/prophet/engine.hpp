#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "prophet/instance.hpp"
#include "prophet/rng.hpp"
#include "prophet/rules.hpp"
#include "prophet/version.hpp"

namespace prophet {

// One simulated run of a threshold rule.
struct Trajectory {
    double drawn_threshold = 0;
    std::optional<int> stop_index;  // 1-based scan position; empty when no value was taken
    double payoff = 0;
    int tie_events = 0;  // values that landed exactly on the threshold
};

enum class EvalMethod { enumeration, closed_form, quadrature, monte_carlo };

struct TailPoint {
    double z = 0;
    double prob = 0;  // P(payoff > z)
    double se = 0;    // standard error; 0 for exact methods
};

// Expected payoff of a rule with its threshold-part/surplus-part split.
// threshold_part is E[tau 1{stopped}], surplus_part is E[(payoff - tau)
// 1{stopped}]; the two always sum to the expected payoff.
struct EvalResult {
    double expected_payoff = 0;
    double threshold_part = 0;
    double surplus_part = 0;
    EvalMethod method = EvalMethod::enumeration;
    std::uint64_t trials = 0;  // Monte Carlo only
    double payoff_se = 0;
    double threshold_se = 0;
    double surplus_se = 0;
    std::vector<TailPoint> tail;
    // Full payoff distribution, enumeration only: (payoff value, probability)
    // ascending, including the no-stop mass at 0.
    std::vector<std::pair<double, double>> payoff_pmf;

    bool exact() const {
        return method == EvalMethod::enumeration || method == EvalMethod::closed_form;
    }
    // P(payoff > z) from the exact pmf; requires payoff_pmf to be populated.
    double pmf_tail(double z) const;
};

struct TailEstimate {
    double value = 0;
    double se = 0;
    bool exact = true;
};

// Outcome-space guardrail for the enumeration engine.
inline constexpr double kEnumerationPairLimit = 1e7;

// Draws a threshold according to the rule. The stream must be disjoint from
// any stream used for the scanned values, so the threshold is independent of
// them by construction.
double sample_threshold(const RuleSpec& rule, const Instance& inst, RngStream& rng);

// Simulates one run: draws the threshold from substream 0, the values from
// substream 1, and tie-break ranks from substream 2. A value exactly equal
// to the threshold stops the scan when its fresh uniform rank exceeds the
// threshold's shared rank.
Trajectory run_once(const Instance& inst, const RuleSpec& rule, RngStream& rng);

// Closed-form evaluation of a deterministic threshold, valid for every
// distribution kind. Requires that no item has an atom exactly at tau;
// otherwise throws with a hint to use the tie-break-aware evaluators.
EvalResult exact_evaluate_deterministic(const Instance& inst, double tau);

// Deterministic-threshold evaluation with the tie-break ranks integrated
// out in closed form, valid for every distribution kind including atoms
// exactly at tau. Conditional on the threshold's rank u, each tied value
// fails to exceed with probability F(tau-) + P(X = tau) u; the reach
// factors are polynomials in u and integrate exactly.
EvalResult evaluate_deterministic_with_ties(const Instance& inst, double tau);

// Rank-averaged reach probability of item `index` (0-based) at threshold t:
// the integral over the threshold rank of prod_{j<index} (F_j(t-) + P(X_j = t) u).
// Equals the plain prefix product when no earlier item has an atom at t.
double rank_averaged_reach(const Instance& inst, std::size_t index, double t);

// Exact evaluation by enumerating every (outcome vector, threshold atom)
// pair; the tie-break randomness is integrated in closed form per pair.
// Requires finite supports everywhere; refuses outcome spaces larger than
// kEnumerationPairLimit pairs.
EvalResult exact_evaluate(const Instance& inst, const RuleSpec& rule);

// Expected payoff of any rule on any instance by the cheapest applicable
// deterministic route: enumeration for finite instances, the closed forms
// for deterministic/finite-atom laws, and piecewise quadrature against the
// law of the maximum otherwise. The quadrature route reports expectation
// parts only (empty tail).
EvalResult evaluate_expectation(const Instance& inst, const RuleSpec& rule);

// Seeded Monte Carlo over independent per-trial substreams. Results are
// bit-identical for a fixed (seed, trials, rule, instance) regardless of
// the thread count: trials are accumulated in fixed-size blocks and the
// block sums are merged in index order.
EvalResult monte_carlo(const Instance& inst, const RuleSpec& rule,
                       std::uint64_t trials, std::uint64_t seed,
                       std::span<const double> zgrid = {}, int threads = 1);

// P(payoff > z): exact when an exact route exists, Monte Carlo otherwise.
TailEstimate tail_probability(const Instance& inst, const RuleSpec& rule, double z,
                              std::uint64_t trials = 1000000,
                              std::uint64_t seed = kDefaultSeed);

}  // namespace prophet
