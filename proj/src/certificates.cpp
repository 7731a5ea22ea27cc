#include "prophet/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "prophet/errors.hpp"
#include "prophet/quadrature.hpp"

namespace prophet {

namespace {

CertificateReport finish(CertificateReport r) {
    r.passed = r.margin >= -r.tolerance;
    return r;
}

double plain_reach(const Instance& inst, std::size_t index, double t) {
    double prod = 1.0;
    for (std::size_t j = 0; j < index; ++j) prod *= inst.item(j).cdf(t);
    return prod;
}

// E[(M - T)^+] for an independent identically distributed pair drawn from
// the law of the maximum; equals the integral of F (1 - F). Exact piecewise
// sum for finite instances (F is constant between consecutive atoms).
double iid_max_gap(const Instance& inst) {
    if (inst.all_finite_support()) {
        const auto atoms = inst.max_atoms();
        double cum = 0;
        double total = 0;
        for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
            cum += atoms[k].second;
            total += cum * (1.0 - cum) * (atoms[k + 1].first - atoms[k].first);
        }
        return total;
    }
    const double hi = inst.tail_cutoff(1e-13);
    const auto cuts = inst.quadrature_breakpoints();
    return integrate_piecewise(
        [&](double x) {
            const double f = inst.max_cdf(x);
            return f * (1.0 - f);
        },
        0.0, hi, cuts, 1e-10);
}

// Cumulative averaged reach against the law of the maximum:
// A_i(x) = integral over [0, x] of prod_{j<i} F_j d(law of max). Atom terms
// use the rank-averaged reach when tie_aware (matching the tie-broken
// engine) and the plain right-continuous reach otherwise; the continuous
// part always integrates the plain reach against the continuous density.
class MaxLawReachTable {
public:
    MaxLawReachTable(const Instance& inst, bool tie_aware) : inst_(inst) {
        atoms_ = inst.max_atoms();
        const std::size_t n = inst.size();
        atom_reach_.assign(n, std::vector<double>(atoms_.size(), 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < atoms_.size(); ++k) {
                atom_reach_[i][k] = tie_aware
                                        ? rank_averaged_reach(inst, i, atoms_[k].first)
                                        : plain_reach(inst, i, atoms_[k].first);
            }
        }
        if (!inst.all_finite_support()) {
            hi_ = inst.tail_cutoff(1e-13);
            bounds_ = inst.quadrature_breakpoints();
            bounds_.push_back(0.0);
            bounds_.push_back(hi_);
            std::sort(bounds_.begin(), bounds_.end());
            bounds_.erase(std::unique(bounds_.begin(), bounds_.end()), bounds_.end());
            bounds_.erase(std::remove_if(bounds_.begin(), bounds_.end(),
                                         [this](double b) { return b < 0.0 || b > hi_; }),
                          bounds_.end());
            ccont_.assign(n, std::vector<double>(bounds_.size(), 0.0));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k + 1 < bounds_.size(); ++k) {
                    ccont_[i][k + 1] =
                        ccont_[i][k] +
                        adaptive_simpson([&](double t) { return cont_integrand(i, t); },
                                         bounds_[k], bounds_[k + 1], 1e-13)
                            .value;
                }
            }
        }
    }

    double value(std::size_t i, double x) const {
        double v = 0;
        for (std::size_t k = 0; k < atoms_.size() && atoms_[k].first <= x; ++k) {
            v += atoms_[k].second * atom_reach_[i][k];
        }
        if (!bounds_.empty()) {
            const double xc = std::min(x, hi_);
            if (xc > 0.0) {
                auto it = std::upper_bound(bounds_.begin(), bounds_.end(), xc);
                const std::size_t k = static_cast<std::size_t>(it - bounds_.begin()) - 1;
                v += ccont_[i][k];
                if (xc > bounds_[k]) {
                    v += adaptive_simpson([&](double t) { return cont_integrand(i, t); },
                                          bounds_[k], xc, 1e-13)
                             .value;
                }
            }
        }
        return v;
    }

private:
    double cont_integrand(std::size_t i, double t) const {
        const double fc = inst_.max_continuous_density(t);
        return fc == 0.0 ? 0.0 : fc * plain_reach(inst_, i, t);
    }

    const Instance& inst_;
    std::vector<std::pair<double, double>> atoms_;
    std::vector<std::vector<double>> atom_reach_;
    std::vector<double> bounds_;
    std::vector<std::vector<double>> ccont_;
    double hi_ = 0;
};

// Integral of t (1 - F(t)) against the law of the maximum.
double threshold_part_against_max_law(const Instance& inst) {
    double total = 0;
    for (const auto& [a, ja] : inst.max_atoms()) {
        total += a * (1.0 - inst.max_cdf(a)) * ja;
    }
    if (!inst.all_finite_support()) {
        const double hi = inst.tail_cutoff(1e-13);
        const auto cuts = inst.quadrature_breakpoints();
        total += integrate_piecewise(
            [&](double t) {
                const double fc = inst.max_continuous_density(t);
                return fc == 0.0 ? 0.0 : fc * t * (1.0 - inst.max_cdf(t));
            },
            0.0, hi, cuts, 1e-10);
    }
    return total;
}

}  // namespace

CertificateReport check_decomposition(const Instance& inst, const RuleSpec& rule,
                                      const CertifyOptions& opts) {
    CertificateReport r;
    r.name = "decomposition";
    try {
        const EvalResult ev = exact_evaluate(inst, rule);
        r.lhs = ev.expected_payoff;
        r.rhs = ev.threshold_part + ev.surplus_part;
        r.margin = -std::abs(r.lhs - r.rhs);
        r.tolerance = 1e-12;
        r.method = CheckMethod::exact;
    } catch (const UnsupportedExactError&) {
        const EvalResult mc = monte_carlo(inst, rule, opts.trials, opts.seed, {}, opts.threads);
        r.lhs = mc.expected_payoff;
        r.rhs = mc.threshold_part + mc.surplus_part;
        r.margin = -std::abs(r.lhs - r.rhs);
        r.se = std::sqrt(mc.payoff_se * mc.payoff_se + mc.threshold_se * mc.threshold_se +
                         mc.surplus_se * mc.surplus_se);
        r.tolerance = std::max(3.0 * r.se, 1e-12);
        r.method = CheckMethod::monte_carlo;
        r.trials = opts.trials;
        r.seed = opts.seed;
    }
    return finish(std::move(r));
}

CertificateReport check_deterministic_certificate(const Instance& inst, double tau) {
    CertificateReport r;
    r.name = "deterministic-surplus-certificate";
    const EvalResult ev = evaluate_deterministic_with_ties(inst, tau);
    const double p = inst.exceed_prob(tau);
    r.lhs = ev.expected_payoff;
    r.rhs = p * tau + (1.0 - p) * inst.aggregate_surplus(tau);
    r.margin = r.lhs - r.rhs;
    r.tolerance = 1e-9;
    r.method = CheckMethod::exact;
    return finish(std::move(r));
}

CertificateReport check_factored_certificate(const Instance& inst, double tau) {
    CertificateReport r;
    r.name = "factored-certificate";
    const EvalResult ev = evaluate_deterministic_with_ties(inst, tau);
    const double hm = 0.5 * inst.expected_max();
    const double p = inst.exceed_prob(tau);
    const double product = (1.0 - 2.0 * p) * (hm - tau);
    r.lhs = ev.expected_payoff;
    r.rhs = hm + product;
    r.margin = r.lhs - r.rhs;
    r.tolerance = 1e-9;
    r.method = inst.all_finite_support() ? CheckMethod::exact : CheckMethod::quadrature;
    r.extras.emplace_back("product_term", product);
    return finish(std::move(r));
}

CertificateReport check_fixed_point_sandwich(const Instance& inst) {
    CertificateReport r;
    r.name = "fixed-point-sandwich";
    const double balanced = balanced_surplus(inst, 1e-12);
    const double alg = evaluate_deterministic_with_ties(inst, balanced).expected_payoff;
    const double em = inst.expected_max();
    const double slack_alg = alg - balanced;
    const double slack_sandwich = 2.0 * balanced - em;
    r.lhs = alg;
    r.rhs = balanced;
    r.margin = std::min(slack_alg, slack_sandwich);
    r.tolerance = 1e-9;
    r.method = inst.all_finite_support() ? CheckMethod::exact : CheckMethod::quadrature;
    r.extras.emplace_back("balanced", balanced);
    r.extras.emplace_back("expected_max", em);
    r.extras.emplace_back("slack_alg", slack_alg);
    r.extras.emplace_back("slack_sandwich", slack_sandwich);
    return finish(std::move(r));
}

CertificateReport check_interval_guarantee(const Instance& inst, int points) {
    if (points < 2) throw std::domain_error("check_interval_guarantee: points must be at least 2");
    CertificateReport r;
    r.name = "interval-guarantee";
    const ThresholdSet ts = certified_interval(inst);
    const double em = inst.expected_max();
    double worst = std::numeric_limits<double>::infinity();
    double worst_tau = ts.certified_lo;
    for (int k = 0; k < points; ++k) {
        const double tau =
            ts.certified_lo +
            (ts.certified_hi - ts.certified_lo) * static_cast<double>(k) / (points - 1);
        const double e = evaluate_deterministic_with_ties(inst, tau).expected_payoff;
        if (e < worst) {
            worst = e;
            worst_tau = tau;
        }
    }
    r.lhs = worst;
    r.rhs = 0.5 * em;
    r.margin = r.lhs - r.rhs;
    r.worst_x = worst_tau;
    r.tolerance = 1e-9;
    r.method = inst.all_finite_support() ? CheckMethod::exact : CheckMethod::quadrature;
    return finish(std::move(r));
}

double averaged_surplus(const Instance& inst, const ThresholdLaw& law,
                        std::span<const double> xgrid) {
    double total = 0;
    for (const auto& [t, w] : law.atoms) {
        double s = 0;
        for (std::size_t i = 0; i < inst.size(); ++i) {
            s += rank_averaged_reach(inst, i, t) * inst.item(i).partial_expectation(t);
        }
        total += w * s;
    }
    if (law.max_law_weight == 0.0) return total;

    if (inst.all_finite_support()) {
        for (const auto& [a, pa] : inst.max_atoms()) {
            double s = 0;
            for (std::size_t i = 0; i < inst.size(); ++i) {
                s += rank_averaged_reach(inst, i, a) * inst.item(i).partial_expectation(a);
            }
            total += law.max_law_weight * pa * s;
        }
        return total;
    }

    // Tail-level form of the double integral: at each level x the item tail
    // 1 - F_i(x) weighs the averaged reach mass of thresholds below x.
    const MaxLawReachTable table(inst, /*tie_aware=*/true);
    const double hi = inst.tail_cutoff(1e-13);
    std::vector<double> cuts = inst.quadrature_breakpoints();
    cuts.insert(cuts.end(), xgrid.begin(), xgrid.end());
    const double outer = integrate_piecewise(
        [&](double x) {
            double s = 0;
            for (std::size_t i = 0; i < inst.size(); ++i) {
                const double ti = 1.0 - inst.item(i).cdf(x);
                if (ti > 0.0) s += ti * table.value(i, x);
            }
            return s;
        },
        0.0, hi, cuts, 1e-9);
    return total + law.max_law_weight * outer;
}

CertificateReport check_averaged_surplus_identity(const Instance& inst, const RuleSpec& rule,
                                                  const CertifyOptions& opts) {
    (void)opts;
    CertificateReport r;
    r.name = "averaged-surplus-identity";
    const ThresholdLaw law = threshold_law(rule);
    r.lhs = averaged_surplus(inst, law);
    const EvalResult ev = evaluate_expectation(inst, rule);
    r.rhs = ev.surplus_part;
    r.margin = -std::abs(r.lhs - r.rhs);
    const bool exact = inst.all_finite_support() || law.max_law_weight == 0.0;
    r.tolerance = exact ? 1e-9 : 1e-7;
    r.method = exact ? CheckMethod::exact : CheckMethod::quadrature;
    return finish(std::move(r));
}

CertificateReport check_max_law_surplus_bound(const Instance& inst, const CertifyOptions& opts) {
    (void)opts;
    CertificateReport r;
    r.name = "max-law-surplus-bound";
    if (inst.all_finite_support()) {
        r.lhs = exact_evaluate(inst, RuleSpec::sample_max()).surplus_part;
        r.method = CheckMethod::exact;
        r.tolerance = 1e-9;
    } else {
        ThresholdLaw law;
        law.max_law_weight = 1.0;
        r.lhs = averaged_surplus(inst, law);
        r.method = CheckMethod::quadrature;
        r.tolerance = 1e-7;
    }
    r.rhs = 0.5 * iid_max_gap(inst);
    r.margin = r.lhs - r.rhs;
    return finish(std::move(r));
}

CertificateReport check_averaged_reach_condition(const Instance& inst, const ThresholdLaw& law,
                                                 std::span<const double> xgrid) {
    CertificateReport r;
    r.name = "averaged-reach-condition";
    std::vector<double> grid(xgrid.begin(), xgrid.end());
    if (grid.empty()) grid = default_grid(inst);

    const bool exact = inst.all_finite_support() || law.max_law_weight == 0.0;
    std::optional<MaxLawReachTable> table;
    std::vector<std::pair<double, double>> max_atoms;
    if (law.max_law_weight > 0.0) {
        if (inst.all_finite_support()) {
            max_atoms = inst.max_atoms();
        } else {
            table.emplace(inst, /*tie_aware=*/false);
        }
    }

    double worst = std::numeric_limits<double>::infinity();
    double worst_lhs = 0;
    double worst_rhs = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        for (double x : grid) {
            double inner = 0;
            for (const auto& [t, w] : law.atoms) {
                if (t <= x) inner += w * plain_reach(inst, i, t);
            }
            if (law.max_law_weight > 0.0) {
                if (table) {
                    inner += law.max_law_weight * table->value(i, x);
                } else {
                    for (const auto& [a, pa] : max_atoms) {
                        if (a <= x) inner += law.max_law_weight * pa * plain_reach(inst, i, a);
                    }
                }
            }
            const double bound = 0.5 * inst.max_cdf(x) * plain_reach(inst, i, x);
            const double diff = inner - bound;
            if (diff < worst) {
                worst = diff;
                worst_lhs = inner;
                worst_rhs = bound;
                r.worst_x = x;
                r.worst_item = static_cast<int>(i) + 1;
            }
        }
    }
    r.lhs = worst_lhs;
    r.rhs = worst_rhs;
    r.margin = worst;
    r.tolerance = exact ? 1e-9 : 1e-7;
    r.method = exact ? CheckMethod::exact : CheckMethod::quadrature;
    return finish(std::move(r));
}

CertificateReport check_threshold_part_condition(const Instance& inst, const ThresholdLaw& law) {
    CertificateReport r;
    r.name = "threshold-part-condition";
    const double against_max = threshold_part_against_max_law(inst);
    double lhs = law.max_law_weight * against_max;
    for (const auto& [t, w] : law.atoms) {
        lhs += w * t * (1.0 - inst.max_cdf(t));
    }
    r.lhs = lhs;
    r.rhs = against_max;
    r.margin = r.lhs - r.rhs;
    const bool exact = inst.all_finite_support();
    r.tolerance = exact ? 1e-9 : 1e-7;
    r.method = exact ? CheckMethod::exact : CheckMethod::quadrature;
    return finish(std::move(r));
}

CertificateReport check_tail_dominance(const Instance& inst, const RuleSpec& rule,
                                       std::span<const double> zgrid,
                                       const CertifyOptions& opts) {
    if (rule.kind() != RuleKind::sample_max && rule.kind() != RuleKind::inverse_cdf_max) {
        throw std::invalid_argument(
            "check_tail_dominance: rule must draw its threshold from the law of the maximum");
    }
    CertificateReport r;
    r.name = "tail-dominance";

    if (inst.all_finite_support()) {
        const EvalResult ev = exact_evaluate(inst, rule);
        std::vector<double> grid(zgrid.begin(), zgrid.end());
        if (grid.empty()) {
            grid.push_back(0.0);
            for (std::size_t k = 0; k < ev.payoff_pmf.size(); ++k) {
                grid.push_back(ev.payoff_pmf[k].first);
                if (k + 1 < ev.payoff_pmf.size()) {
                    grid.push_back(0.5 * (ev.payoff_pmf[k].first + ev.payoff_pmf[k + 1].first));
                }
            }
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        }
        double worst = std::numeric_limits<double>::infinity();
        for (double z : grid) {
            const double lhs = ev.pmf_tail(z);
            const double rhs = 0.5 * inst.exceed_prob(z);
            if (lhs - rhs < worst) {
                worst = lhs - rhs;
                r.lhs = lhs;
                r.rhs = rhs;
                r.worst_x = z;
            }
        }
        r.margin = worst;
        r.tolerance = 1e-9;
        r.method = CheckMethod::exact;
        return finish(std::move(r));
    }

    std::vector<double> grid(zgrid.begin(), zgrid.end());
    if (grid.empty()) grid = default_grid(inst);
    const EvalResult mc = monte_carlo(inst, rule, opts.trials, opts.seed, grid, opts.threads);
    double worst = std::numeric_limits<double>::infinity();
    double worst_se = 0;
    for (const TailPoint& tp : mc.tail) {
        const double rhs = 0.5 * inst.exceed_prob(tp.z);
        if (tp.prob - rhs < worst) {
            worst = tp.prob - rhs;
            worst_se = tp.se;
            r.lhs = tp.prob;
            r.rhs = rhs;
            r.worst_x = tp.z;
        }
    }
    r.margin = worst;
    r.se = worst_se;
    r.tolerance = std::max(3.0 * worst_se, 1e-12);
    r.method = CheckMethod::monte_carlo;
    r.trials = opts.trials;
    r.seed = opts.seed;
    return finish(std::move(r));
}

CertificateReport check_exchangeability(const Instance& inst, const CertifyOptions& opts) {
    CertificateReport r;
    r.name = "exchangeability";

    if (inst.all_finite_support()) {
        const auto atoms = inst.max_atoms();
        double lhs = 0;
        double em = 0;
        for (const auto& [a, pa] : atoms) {
            em += a * pa;
            for (const auto& [b, pb] : atoms) {
                if (a > b) {
                    lhs += pa * pb * (a + b);
                } else if (a == b) {
                    lhs += 0.5 * pa * pb * (a + b);
                }
            }
        }
        r.lhs = lhs;
        r.rhs = em;
        r.margin = -std::abs(lhs - em);
        r.tolerance = 1e-9;
        r.method = CheckMethod::exact;
        return finish(std::move(r));
    }

    if (inst.atom_union().empty()) {
        // Continuous product CDF: evaluate the nested double integral
        // directly (no symmetry shortcut) and compare against the tail
        // integral route for E[max].
        const double hi = inst.tail_cutoff(1e-13);
        std::vector<double> bounds = inst.quadrature_breakpoints();
        bounds.push_back(0.0);
        bounds.push_back(hi);
        std::sort(bounds.begin(), bounds.end());
        bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
        bounds.erase(std::remove_if(bounds.begin(), bounds.end(),
                                    [hi](double b) { return b < 0.0 || b > hi; }),
                     bounds.end());

        const auto bf = [&](double b) { return b * inst.max_continuous_density(b); };
        std::vector<double> jcum(bounds.size(), 0.0);
        for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
            jcum[k + 1] = jcum[k] +
                          adaptive_simpson(bf, bounds[k], bounds[k + 1], 1e-13).value;
        }
        const auto inner_j = [&](double a) {
            auto it = std::upper_bound(bounds.begin(), bounds.end(), a);
            const std::size_t k = static_cast<std::size_t>(it - bounds.begin()) - 1;
            double j = jcum[k];
            if (a > bounds[k]) j += adaptive_simpson(bf, bounds[k], a, 1e-13).value;
            return j;
        };
        r.lhs = integrate_piecewise(
            [&](double a) {
                const double fa = inst.max_continuous_density(a);
                if (fa == 0.0) return 0.0;
                return fa * (a * inst.max_cdf(a) + inner_j(a));
            },
            0.0, hi, bounds, 1e-9);
        r.rhs = inst.expected_max();
        r.margin = -std::abs(r.lhs - r.rhs);
        r.tolerance = 1e-7;
        r.method = CheckMethod::quadrature;
        return finish(std::move(r));
    }

    // Mixed atomic/continuous law of the maximum: seeded Monte Carlo over
    // independent pair draws with ties weighted one half.
    const RngStream root(opts.seed);
    double sum = 0;
    double sq = 0;
    for (std::uint64_t k = 0; k < opts.trials; ++k) {
        RngStream trial = root.substream(k);
        RngStream sa = trial.substream(0);
        RngStream sb = trial.substream(1);
        double a = inst.item(0).sample(sa);
        double b = inst.item(0).sample(sb);
        for (std::size_t i = 1; i < inst.size(); ++i) {
            a = std::max(a, inst.item(i).sample(sa));
            b = std::max(b, inst.item(i).sample(sb));
        }
        const double w = a > b ? 1.0 : (a == b ? 0.5 : 0.0);
        const double v = (a + b) * w;
        sum += v;
        sq += v * v;
    }
    const double n = static_cast<double>(opts.trials);
    r.lhs = sum / n;
    r.rhs = inst.expected_max();
    r.margin = -std::abs(r.lhs - r.rhs);
    const double var = std::max(0.0, (sq - sum * sum / n) / (n - 1.0));
    r.se = std::sqrt(var / n);
    r.tolerance = std::max(3.0 * r.se, 1e-12);
    r.method = CheckMethod::monte_carlo;
    r.trials = opts.trials;
    r.seed = opts.seed;
    return finish(std::move(r));
}

CertificateReport half_ratio_report(const Instance& inst, const RuleSpec& rule,
                                    const CertifyOptions& opts) {
    (void)opts;
    CertificateReport r;
    r.name = "half-ratio";
    const EvalResult ev = evaluate_expectation(inst, rule);
    r.lhs = ev.expected_payoff;
    r.rhs = 0.5 * inst.expected_max();
    r.margin = r.lhs - r.rhs;
    const bool exact = ev.exact() && inst.all_finite_support();
    r.tolerance = exact ? 1e-9 : 1e-7;
    r.method = exact ? CheckMethod::exact : CheckMethod::quadrature;
    if (rule.kind() == RuleKind::empirical) {
        r.note = "empirical thresholds carry the guarantee only when the stored "
                 "samples are genuine draws of the maximum";
    }
    return finish(std::move(r));
}

}  // namespace prophet
