#include "prophet/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "prophet/errors.hpp"
#include "prophet/quadrature.hpp"

namespace prophet {

namespace {

// Polynomials in the threshold rank u, stored as coefficient vectors.
using Poly = std::vector<double>;

double poly_integral01(const Poly& p) {
    double s = 0;
    for (std::size_t j = 0; j < p.size(); ++j) s += p[j] / static_cast<double>(j + 1);
    return s;
}

// p(u) * (c0 + c1 u)
Poly poly_mul_linear(const Poly& p, double c0, double c1) {
    Poly out(p.size() + 1, 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        out[j] += p[j] * c0;
        out[j + 1] += p[j] * c1;
    }
    if (out.back() == 0.0) out.pop_back();
    return out;
}

// integral over [0,1] of p(u) (1 - u)
double poly_integral01_times_1mu(const Poly& p) {
    double s = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        s += p[j] * (1.0 / static_cast<double>(j + 1) - 1.0 / static_cast<double>(j + 2));
    }
    return s;
}

std::vector<double> merge_grid(std::vector<double> grid, double extra) {
    grid.push_back(extra);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

}  // namespace

double EvalResult::pmf_tail(double z) const {
    double p = 0;
    for (auto it = payoff_pmf.rbegin(); it != payoff_pmf.rend(); ++it) {
        if (it->first <= z) break;
        p += it->second;
    }
    return p;
}

double sample_threshold(const RuleSpec& rule, const Instance& inst, RngStream& rng) {
    switch (rule.kind()) {
        case RuleKind::deterministic:
            return rule.tau();
        case RuleKind::sample_max: {
            double m = inst.item(0).sample(rng);
            for (std::size_t i = 1; i < inst.size(); ++i) {
                m = std::max(m, inst.item(i).sample(rng));
            }
            return m;
        }
        case RuleKind::inverse_cdf_max:
            return inst.max_quantile(rng.uniform01());
        case RuleKind::empirical:
            return rule.samples()[rng.below(rule.samples().size())];
        case RuleKind::mixture: {
            if (rng.uniform01() < rule.alpha()) {
                return inst.max_quantile(rng.uniform01());
            }
            return rule.base_tau();
        }
    }
    return 0.0;
}

Trajectory run_once(const Instance& inst, const RuleSpec& rule, RngStream& rng) {
    RngStream tau_rng = rng.substream(0);
    RngStream value_rng = rng.substream(1);
    RngStream tie_rng = rng.substream(2);

    Trajectory tr;
    tr.drawn_threshold = sample_threshold(rule, inst, tau_rng);

    double tau_rank = -1.0;  // drawn lazily on the first tie
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const double x = inst.item(i).sample(value_rng);
        bool exceeds = x > tr.drawn_threshold;
        if (!exceeds && x == tr.drawn_threshold) {
            ++tr.tie_events;
            if (tau_rank < 0.0) tau_rank = tie_rng.uniform01();
            exceeds = tie_rng.uniform01() > tau_rank;
        }
        if (exceeds) {
            tr.stop_index = static_cast<int>(i) + 1;
            tr.payoff = x;
            break;
        }
    }
    return tr;
}

EvalResult exact_evaluate_deterministic(const Instance& inst, double tau) {
    if (!(tau >= 0.0)) throw std::domain_error("exact_evaluate_deterministic: tau must be nonnegative");
    for (std::size_t i = 0; i < inst.size(); ++i) {
        if (inst.item(i).atom_at(tau) > 0.0) {
            std::ostringstream msg;
            msg << "item " << i + 1 << " has an atom exactly at tau = " << tau
                << "; use exact_evaluate or evaluate_deterministic_with_ties";
            throw UnsupportedExactError(msg.str());
        }
    }

    EvalResult r;
    r.method = EvalMethod::closed_form;
    const double p = inst.exceed_prob(tau);
    r.threshold_part = tau * p;

    std::vector<double> reach(inst.size());
    double prefix = 1.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        reach[i] = prefix;
        r.surplus_part += prefix * inst.item(i).partial_expectation(tau);
        prefix *= inst.item(i).cdf(tau);
    }
    r.expected_payoff = r.threshold_part + r.surplus_part;

    for (double z : default_grid(inst)) {
        double t = 0;
        const double cut = std::max(tau, z);
        for (std::size_t i = 0; i < inst.size(); ++i) {
            t += reach[i] * (1.0 - inst.item(i).cdf(cut));
        }
        r.tail.push_back({z, t, 0.0});
    }
    return r;
}

namespace {

// Per-item quantities of a deterministic threshold with the tie-break ranks
// integrated out. reach_int[i] is the integral over the threshold rank of
// the product of "does not exceed" probabilities of items before i;
// reach_tie_int[i] carries the extra (1 - u) factor of a tie acceptance at
// position i.
struct TieAwareEval {
    const Instance& inst;
    double tau;
    std::vector<double> atom, strict, surplus;
    std::vector<double> reach_int, reach_tie_int;
    double no_stop = 0;

    TieAwareEval(const Instance& instance, double t) : inst(instance), tau(t) {
        const std::size_t n = inst.size();
        atom.resize(n);
        strict.resize(n);
        surplus.resize(n);
        reach_int.resize(n);
        reach_tie_int.resize(n);
        Poly reach{1.0};
        for (std::size_t i = 0; i < n; ++i) {
            const Distribution& d = inst.item(i);
            atom[i] = d.atom_at(tau);
            strict[i] = 1.0 - d.cdf(tau);
            surplus[i] = d.partial_expectation(tau);
            reach_int[i] = poly_integral01(reach);
            reach_tie_int[i] = poly_integral01_times_1mu(reach);
            reach = poly_mul_linear(reach, d.cdf_left(tau), atom[i]);
        }
        no_stop = poly_integral01(reach);
    }

    double expected_payoff() const {
        double e = 0;
        for (std::size_t i = 0; i < inst.size(); ++i) {
            e += tau * atom[i] * reach_tie_int[i] +
                 (surplus[i] + tau * strict[i]) * reach_int[i];
        }
        return e;
    }

    double threshold_part() const { return tau * (1.0 - no_stop); }

    double surplus_part() const {
        double s = 0;
        for (std::size_t i = 0; i < inst.size(); ++i) s += surplus[i] * reach_int[i];
        return s;
    }

    // P(payoff > z); the payoff is the unperturbed accepted value, so a tie
    // acceptance pays exactly tau.
    double tail_at(double z) const {
        double t = 0;
        const double cut = std::max(tau, z);
        for (std::size_t i = 0; i < inst.size(); ++i) {
            if (tau > z) t += atom[i] * reach_tie_int[i];
            t += reach_int[i] * (1.0 - inst.item(i).cdf(cut));
        }
        return t;
    }
};

}  // namespace

EvalResult evaluate_deterministic_with_ties(const Instance& inst, double tau) {
    if (!(tau >= 0.0)) {
        throw std::domain_error("evaluate_deterministic_with_ties: tau must be nonnegative");
    }
    const TieAwareEval ev(inst, tau);
    EvalResult r;
    r.method = EvalMethod::closed_form;
    r.expected_payoff = ev.expected_payoff();
    r.threshold_part = ev.threshold_part();
    r.surplus_part = ev.surplus_part();
    for (double z : merge_grid(default_grid(inst), tau)) {
        r.tail.push_back({z, ev.tail_at(z), 0.0});
    }
    return r;
}

double rank_averaged_reach(const Instance& inst, std::size_t index, double t) {
    Poly reach{1.0};
    for (std::size_t j = 0; j < index; ++j) {
        reach = poly_mul_linear(reach, inst.item(j).cdf_left(t), inst.item(j).atom_at(t));
    }
    return poly_integral01(reach);
}

namespace {

// Depth-first enumeration of outcome vectors for one threshold atom.
// Ties ahead of the first strict exceeder are integrated against the shared
// threshold rank: with k ties then a strict exceeder of value v, the m-th
// tied position accepts with probability 1/(m (m+1)) and the strict
// exceeder is reached with probability 1/(k+1). With no strict exceeder
// and K ties in total, the scan stops with probability K/(K+1).
struct Enumerator {
    const Instance& inst;
    double t = 0;
    double threshold_part = 0;
    double surplus_part = 0;
    std::map<double, double>& pmf;

    void walk(std::size_t i, double w, int k) {
        if (i == inst.size()) {
            const double kk = static_cast<double>(k);
            const double stop = kk / (kk + 1.0);
            threshold_part += w * t * stop;
            if (k > 0) pmf[t] += w * stop;
            pmf[0.0] += w / (kk + 1.0);
            return;
        }
        const Distribution& d = inst.item(i);
        const auto support = d.support();
        const auto probs = d.probs();
        for (std::size_t a = 0; a < support.size(); ++a) {
            const double x = support[a];
            const double w2 = w * probs[a];
            if (x > t) {
                // Later items never matter once a strict exceeder exists.
                const double kk = static_cast<double>(k);
                threshold_part += w2 * t;
                surplus_part += w2 * (x - t) / (kk + 1.0);
                if (k > 0) pmf[t] += w2 * kk / (kk + 1.0);
                pmf[x] += w2 / (kk + 1.0);
            } else if (x == t) {
                walk(i + 1, w2, k + 1);
            } else {
                walk(i + 1, w2, k);
            }
        }
    }
};

}  // namespace

EvalResult exact_evaluate(const Instance& inst, const RuleSpec& rule) {
    if (!inst.all_finite_support()) {
        throw UnsupportedExactError(
            "exact_evaluate requires finite support for every item");
    }
    const auto atoms = expand_law_atoms(threshold_law(rule), inst);

    double outcome_count = 1;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        outcome_count *= static_cast<double>(inst.item(i).support().size());
    }
    const double pairs = outcome_count * static_cast<double>(atoms.size());
    if (pairs > kEnumerationPairLimit) {
        std::ostringstream msg;
        msg << "exact_evaluate: outcome space of " << pairs
            << " (outcome vector, threshold atom) pairs exceeds the guardrail of "
            << kEnumerationPairLimit;
        throw EnumerationLimitError(msg.str());
    }

    EvalResult r;
    r.method = EvalMethod::enumeration;
    std::map<double, double> pmf;
    for (const auto& [t, g] : atoms) {
        Enumerator en{inst, t, 0.0, 0.0, pmf};
        en.walk(0, g, 0);
        r.threshold_part += en.threshold_part;
        r.surplus_part += en.surplus_part;
    }

    r.payoff_pmf.assign(pmf.begin(), pmf.end());
    for (const auto& [value, mass] : r.payoff_pmf) r.expected_payoff += value * mass;
    for (const auto& [value, mass] : r.payoff_pmf) {
        (void)mass;
        r.tail.push_back({value, r.pmf_tail(value), 0.0});
    }
    return r;
}

EvalResult evaluate_expectation(const Instance& inst, const RuleSpec& rule) {
    if (inst.all_finite_support()) return exact_evaluate(inst, rule);
    if (rule.kind() == RuleKind::deterministic) {
        return evaluate_deterministic_with_ties(inst, rule.tau());
    }

    const ThresholdLaw law = threshold_law(rule);
    EvalResult r;
    r.method = law.max_law_weight > 0.0 ? EvalMethod::quadrature : EvalMethod::closed_form;

    for (const auto& [t, w] : law.atoms) {
        const EvalResult d = evaluate_deterministic_with_ties(inst, t);
        r.expected_payoff += w * d.expected_payoff;
        r.threshold_part += w * d.threshold_part;
        r.surplus_part += w * d.surplus_part;
    }
    if (law.max_law_weight > 0.0) {
        const double alpha = law.max_law_weight;
        for (const auto& [a, ja] : inst.max_atoms()) {
            const EvalResult d = evaluate_deterministic_with_ties(inst, a);
            r.expected_payoff += alpha * ja * d.expected_payoff;
            r.threshold_part += alpha * ja * d.threshold_part;
            r.surplus_part += alpha * ja * d.surplus_part;
        }
        // Continuous part of the law of the maximum: at non-atom thresholds
        // ties have probability zero and the plain closed forms apply.
        const double hi = inst.tail_cutoff(1e-13);
        const auto cuts = inst.quadrature_breakpoints();
        const auto det_tp = [&](double t) {
            return inst.max_continuous_density(t) * t * inst.exceed_prob(t);
        };
        const auto det_sp = [&](double t) {
            const double fc = inst.max_continuous_density(t);
            if (fc == 0.0) return 0.0;
            double sp = 0;
            double prefix = 1.0;
            for (std::size_t i = 0; i < inst.size(); ++i) {
                sp += prefix * inst.item(i).partial_expectation(t);
                prefix *= inst.item(i).cdf(t);
            }
            return fc * sp;
        };
        const double tp = integrate_piecewise(det_tp, 0.0, hi, cuts, 1e-10);
        const double sp = integrate_piecewise(det_sp, 0.0, hi, cuts, 1e-10);
        const double ev = integrate_piecewise(
            [&](double t) { return det_tp(t) + det_sp(t); }, 0.0, hi, cuts, 1e-10);
        r.threshold_part += alpha * tp;
        r.surplus_part += alpha * sp;
        r.expected_payoff += alpha * ev;
    }
    return r;
}

namespace {

struct McBlock {
    double sum_pay = 0, sq_pay = 0;
    double sum_tp = 0, sq_tp = 0;
    double sum_sp = 0, sq_sp = 0;
    std::vector<double> tail_count;
};

double stderr_from_sums(double sum, double sq, std::uint64_t n) {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double var = std::max(0.0, (sq - sum * sum / nn) / (nn - 1.0));
    return std::sqrt(var / nn);
}

}  // namespace

EvalResult monte_carlo(const Instance& inst, const RuleSpec& rule,
                       std::uint64_t trials, std::uint64_t seed,
                       std::span<const double> zgrid, int threads) {
    if (trials < 1) throw std::domain_error("monte_carlo: trials must be at least 1");
    if (threads < 1) threads = 1;

    std::vector<double> grid(zgrid.begin(), zgrid.end());
    if (grid.empty()) grid = default_grid(inst);

    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t nblocks = (trials + kBlock - 1) / kBlock;
    std::vector<McBlock> blocks(nblocks);
    for (auto& b : blocks) b.tail_count.assign(grid.size(), 0.0);

    const RngStream root(seed);
    const auto run_blocks = [&](std::uint64_t b0, std::uint64_t b1) {
        for (std::uint64_t b = b0; b < b1; ++b) {
            McBlock& acc = blocks[b];
            const std::uint64_t k0 = b * kBlock;
            const std::uint64_t k1 = std::min(trials, k0 + kBlock);
            for (std::uint64_t k = k0; k < k1; ++k) {
                RngStream trial = root.substream(k);
                const Trajectory tr = run_once(inst, rule, trial);
                const bool stopped = tr.stop_index.has_value();
                const double tp = stopped ? tr.drawn_threshold : 0.0;
                const double sp = stopped ? tr.payoff - tr.drawn_threshold : 0.0;
                acc.sum_pay += tr.payoff;
                acc.sq_pay += tr.payoff * tr.payoff;
                acc.sum_tp += tp;
                acc.sq_tp += tp * tp;
                acc.sum_sp += sp;
                acc.sq_sp += sp * sp;
                for (std::size_t z = 0; z < grid.size(); ++z) {
                    if (tr.payoff > grid[z]) acc.tail_count[z] += 1.0;
                }
            }
        }
    };

    if (threads == 1 || nblocks == 1) {
        run_blocks(0, nblocks);
    } else {
        const std::uint64_t nt = std::min<std::uint64_t>(threads, nblocks);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::uint64_t w = 0; w < nt; ++w) {
            const std::uint64_t b0 = nblocks * w / nt;
            const std::uint64_t b1 = nblocks * (w + 1) / nt;
            pool.emplace_back(run_blocks, b0, b1);
        }
        for (auto& th : pool) th.join();
    }

    McBlock total;
    total.tail_count.assign(grid.size(), 0.0);
    for (const auto& b : blocks) {
        total.sum_pay += b.sum_pay;
        total.sq_pay += b.sq_pay;
        total.sum_tp += b.sum_tp;
        total.sq_tp += b.sq_tp;
        total.sum_sp += b.sum_sp;
        total.sq_sp += b.sq_sp;
        for (std::size_t z = 0; z < grid.size(); ++z) total.tail_count[z] += b.tail_count[z];
    }

    EvalResult r;
    r.method = EvalMethod::monte_carlo;
    r.trials = trials;
    const double n = static_cast<double>(trials);
    r.expected_payoff = total.sum_pay / n;
    r.threshold_part = total.sum_tp / n;
    r.surplus_part = total.sum_sp / n;
    r.payoff_se = stderr_from_sums(total.sum_pay, total.sq_pay, trials);
    r.threshold_se = stderr_from_sums(total.sum_tp, total.sq_tp, trials);
    r.surplus_se = stderr_from_sums(total.sum_sp, total.sq_sp, trials);
    for (std::size_t z = 0; z < grid.size(); ++z) {
        const double c = total.tail_count[z];
        r.tail.push_back({grid[z], c / n, stderr_from_sums(c, c, trials)});
    }
    return r;
}

TailEstimate tail_probability(const Instance& inst, const RuleSpec& rule, double z,
                              std::uint64_t trials, std::uint64_t seed) {
    if (inst.all_finite_support()) {
        const EvalResult r = exact_evaluate(inst, rule);
        return {r.pmf_tail(z), 0.0, true};
    }
    const ThresholdLaw law = threshold_law(rule);
    if (law.max_law_weight == 0.0) {
        // Finite-atom law: mixture of deterministic tie-aware tails.
        double t = 0;
        for (const auto& [tau, w] : law.atoms) {
            t += w * TieAwareEval(inst, tau).tail_at(z);
        }
        return {t, 0.0, true};
    }
    const std::vector<double> grid{z};
    const EvalResult r = monte_carlo(inst, rule, trials, seed, grid);
    return {r.tail[0].prob, r.tail[0].se, false};
}

}  // namespace prophet
