#include <doctest.h>

#include <cmath>
#include <vector>

#include "prophet/engine.hpp"
#include "prophet/errors.hpp"
#include "support.hpp"

using prophet::Distribution;
using prophet::EvalResult;
using prophet::Instance;
using prophet::RngStream;
using prophet::RuleSpec;

TEST_CASE("sample_threshold per rule kind") {
    RngStream root(11);

    SUBCASE("deterministic") {
        RngStream rng = root.substream(0);
        CHECK(prophet::sample_threshold(RuleSpec::deterministic(0.7), support::coin(), rng) == 0.7);
    }
    SUBCASE("sample-max of point masses is their maximum") {
        const Instance inst({Distribution::point_mass(1), Distribution::point_mass(2)});
        RngStream rng = root.substream(1);
        for (int k = 0; k < 50; ++k) {
            CHECK(prophet::sample_threshold(RuleSpec::sample_max(), inst, rng) == 2.0);
        }
    }
    SUBCASE("inverse-cdf draws have the law of the maximum") {
        const Instance inst = support::single_uniform();
        RngStream rng = root.substream(2);
        int below = 0;
        const int n = 1000000;
        for (int k = 0; k < n; ++k) {
            if (prophet::sample_threshold(RuleSpec::inverse_cdf_max(), inst, rng) <= 0.5) ++below;
        }
        CHECK(std::abs(static_cast<double>(below) / n - 0.5) < 0.0015);
    }
    SUBCASE("empirical draws come from the stored samples") {
        const RuleSpec rule = RuleSpec::empirical({0.25, 0.5});
        RngStream rng = root.substream(3);
        for (int k = 0; k < 50; ++k) {
            const double t = prophet::sample_threshold(rule, support::coin(), rng);
            CHECK((t == 0.25 || t == 0.5));
        }
    }
}

TEST_CASE("run_once scan behavior") {
    RngStream root(12);

    SUBCASE("strict exceedance stops at the first item") {
        const Instance inst({Distribution::point_mass(2)});
        RngStream rng = root.substream(0);
        const auto tr = prophet::run_once(inst, RuleSpec::deterministic(1), rng);
        REQUIRE(tr.stop_index.has_value());
        CHECK(*tr.stop_index == 1);
        CHECK(tr.payoff == 2.0);
        CHECK(tr.tie_events == 0);
    }
    SUBCASE("later strict exceedance") {
        const Instance inst({Distribution::point_mass(1), Distribution::point_mass(5)});
        RngStream rng = root.substream(1);
        const auto tr = prophet::run_once(inst, RuleSpec::deterministic(3), rng);
        REQUIRE(tr.stop_index.has_value());
        CHECK(*tr.stop_index == 2);
        CHECK(tr.payoff == 5.0);
    }
    SUBCASE("tie at the threshold stops half the time") {
        const Instance inst({Distribution::point_mass(1)});
        const RuleSpec rule = RuleSpec::deterministic(1);
        int stops = 0;
        const int n = 100000;
        for (int k = 0; k < n; ++k) {
            RngStream rng = root.substream(100 + k);
            const auto tr = prophet::run_once(inst, rule, rng);
            CHECK(tr.tie_events == 1);
            if (tr.stop_index.has_value()) {
                ++stops;
                CHECK(tr.payoff == 1.0);
            }
        }
        CHECK(std::abs(static_cast<double>(stops) / n - 0.5) < 0.005);
    }
}

TEST_CASE("closed-form deterministic evaluation") {
    SUBCASE("single uniform at a quarter") {
        const EvalResult r = prophet::exact_evaluate_deterministic(support::single_uniform(), 0.25);
        CHECK(r.expected_payoff == doctest::Approx(0.46875).epsilon(1e-14));
        CHECK(r.threshold_part == doctest::Approx(0.1875).epsilon(1e-14));
        CHECK(r.surplus_part == doctest::Approx(0.28125).epsilon(1e-14));
    }
    SUBCASE("near-tight at the half-mean accepts the first item") {
        const EvalResult r = prophet::exact_evaluate_deterministic(support::near_tight(), 0.995);
        CHECK(r.expected_payoff == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("threshold above every support earns nothing") {
        const EvalResult r = prophet::exact_evaluate_deterministic(support::coin(), 5.0);
        CHECK(r.expected_payoff == 0.0);
        CHECK(r.threshold_part == 0.0);
        CHECK(r.surplus_part == 0.0);
    }
    SUBCASE("atom at the threshold is rejected with a hint") {
        CHECK_THROWS_WITH_AS(
            (void)prophet::exact_evaluate_deterministic(support::coin(), 2.0),
            doctest::Contains("exact_evaluate"), prophet::UnsupportedExactError);
    }
}

TEST_CASE("enumeration engine worked examples") {
    SUBCASE("coin with a sample-max threshold") {
        const EvalResult r = prophet::exact_evaluate(support::coin(), RuleSpec::sample_max());
        CHECK(r.expected_payoff == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(r.pmf_tail(1.0) == doctest::Approx(0.375).epsilon(1e-15));
        CHECK(r.threshold_part == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(r.surplus_part == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("point mass keeps its value") {
        const Instance inst({Distribution::point_mass(3)});
        const EvalResult r = prophet::exact_evaluate(inst, RuleSpec::deterministic(1.5));
        CHECK(r.expected_payoff == 3.0);
    }
    SUBCASE("two coins at threshold one") {
        const Instance inst({Distribution::discrete({0, 2}, {0.5, 0.5}),
                             Distribution::discrete({0, 2}, {0.5, 0.5})});
        const EvalResult r = prophet::exact_evaluate(inst, RuleSpec::deterministic(1));
        CHECK(r.expected_payoff == doctest::Approx(1.5).epsilon(1e-15));
    }
    SUBCASE("tie integration by hand: point mass on the threshold, then a coin") {
        // Threshold 1; item 1 always ties, item 2 is 2 with probability 1/2.
        // Tie alone accepts with weight 1/2; a following strict exceeder is
        // reached with weight 1/2.
        const Instance inst({Distribution::point_mass(1),
                             Distribution::discrete({0, 2}, {0.5, 0.5})});
        const EvalResult r = prophet::exact_evaluate(inst, RuleSpec::deterministic(1));
        CHECK(r.expected_payoff == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(r.threshold_part == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(r.surplus_part == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("single tie only: half the value") {
        const Instance inst({Distribution::point_mass(1)});
        const EvalResult r = prophet::exact_evaluate(inst, RuleSpec::deterministic(1));
        CHECK(r.expected_payoff == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(r.surplus_part == 0.0);
    }
}

TEST_CASE("enumeration guardrails") {
    SUBCASE("continuous items are refused") {
        CHECK_THROWS_AS(
            (void)prophet::exact_evaluate(support::single_uniform(), RuleSpec::sample_max()),
            prophet::UnsupportedExactError);
    }
    SUBCASE("outcome space limit is enforced and named") {
        std::vector<Distribution> items;
        for (int i = 0; i < 12; ++i) {
            items.push_back(Distribution::discrete(
                {0.1 * i, 0.1 * i + 4, 0.1 * i + 8}, {0.3, 0.3, 0.4}));
        }
        const Instance big(std::move(items));
        CHECK_THROWS_WITH_AS((void)prophet::exact_evaluate(big, RuleSpec::sample_max()),
                             doctest::Contains("guardrail"), prophet::EnumerationLimitError);
    }
}

TEST_CASE("decomposition identity is exact per rule kind") {
    RngStream rng(2024);
    for (int k = 0; k < 40; ++k) {
        RngStream sub = rng.substream(k);
        const Instance inst = support::random_finite_instance(sub);
        const double hm = 0.5 * inst.expected_max();
        RngStream erng = sub.substream(77);
        const std::vector<RuleSpec> rules = {
            RuleSpec::deterministic(hm),
            RuleSpec::sample_max(),
            RuleSpec::inverse_cdf_max(),
            RuleSpec::empirical(support::empirical_maxima(inst, erng, 3)),
            RuleSpec::mixture(0.5, hm),
        };
        for (const RuleSpec& rule : rules) {
            const EvalResult r = prophet::exact_evaluate(inst, rule);
            CHECK(std::abs(r.expected_payoff - (r.threshold_part + r.surplus_part)) <= 1e-12);
            double mass = 0;
            for (const auto& [v, p] : r.payoff_pmf) {
                (void)v;
                mass += p;
            }
            CHECK(std::abs(mass - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("rank-integrated evaluator agrees with enumeration") {
    RngStream rng(2025);
    for (int k = 0; k < 40; ++k) {
        RngStream sub = rng.substream(k);
        const Instance inst = support::random_finite_instance(sub);
        // Thresholds that hit atoms on purpose, plus interior points.
        std::vector<double> taus = inst.atom_union();
        taus.push_back(0.5 * inst.expected_max());
        taus.push_back(0.0);
        for (double tau : taus) {
            const EvalResult en = prophet::exact_evaluate(inst, RuleSpec::deterministic(tau));
            const EvalResult ti = prophet::evaluate_deterministic_with_ties(inst, tau);
            CHECK(en.expected_payoff == doctest::Approx(ti.expected_payoff).epsilon(1e-12));
            CHECK(en.threshold_part == doctest::Approx(ti.threshold_part).epsilon(1e-12));
            CHECK(en.surplus_part == doctest::Approx(ti.surplus_part).epsilon(1e-12));
            for (const auto& tp : ti.tail) {
                CHECK(en.pmf_tail(tp.z) == doctest::Approx(tp.prob).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("enumeration equals the atom mixture of deterministic evaluations") {
    RngStream rng(2026);
    for (int k = 0; k < 25; ++k) {
        RngStream sub = rng.substream(k);
        const Instance inst = support::random_finite_instance(sub);
        const EvalResult en = prophet::exact_evaluate(inst, RuleSpec::sample_max());
        const auto atoms = prophet::expand_law_atoms(
            prophet::threshold_law(RuleSpec::sample_max()), inst);
        double e = 0;
        double tp = 0;
        double sp = 0;
        for (const auto& [t, w] : atoms) {
            const EvalResult d = prophet::evaluate_deterministic_with_ties(inst, t);
            e += w * d.expected_payoff;
            tp += w * d.threshold_part;
            sp += w * d.surplus_part;
        }
        CHECK(en.expected_payoff == doctest::Approx(e).epsilon(1e-12));
        CHECK(en.threshold_part == doctest::Approx(tp).epsilon(1e-12));
        CHECK(en.surplus_part == doctest::Approx(sp).epsilon(1e-12));
    }
}

TEST_CASE("closed form agrees with enumeration away from atoms") {
    RngStream rng(2027);
    for (int k = 0; k < 25; ++k) {
        RngStream sub = rng.substream(k);
        const Instance inst = support::random_finite_instance(sub);
        // Midpoints between atoms are never atoms themselves.
        const auto& atoms = inst.atom_union();
        for (std::size_t a = 0; a + 1 < atoms.size(); ++a) {
            const double tau = 0.5 * (atoms[a] + atoms[a + 1]);
            if (inst.max_cdf(tau) == 0.0 && tau == 0.0) continue;
            const EvalResult cf = prophet::exact_evaluate_deterministic(inst, tau);
            const EvalResult en = prophet::exact_evaluate(inst, RuleSpec::deterministic(tau));
            CHECK(cf.expected_payoff == doctest::Approx(en.expected_payoff).epsilon(1e-12));
            CHECK(cf.threshold_part == doctest::Approx(en.threshold_part).epsilon(1e-12));
            CHECK(cf.surplus_part == doctest::Approx(en.surplus_part).epsilon(1e-12));
        }
    }
}

TEST_CASE("mixture evaluation is affine in the mixing weight") {
    RngStream rng(2028);
    for (int k = 0; k < 25; ++k) {
        RngStream sub = rng.substream(k);
        const Instance inst = support::random_finite_instance(sub);
        const double tau0 = 0.5 * inst.expected_max();
        const EvalResult max_law = prophet::exact_evaluate(inst, RuleSpec::sample_max());
        const EvalResult base = prophet::exact_evaluate(inst, RuleSpec::deterministic(tau0));
        for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
            const EvalResult mix =
                prophet::exact_evaluate(inst, RuleSpec::mixture(alpha, tau0));
            const double want =
                alpha * max_law.expected_payoff + (1.0 - alpha) * base.expected_payoff;
            CHECK(mix.expected_payoff == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("sample-max and inverse-cdf rules have identical exact laws") {
    RngStream rng(2029);
    for (int k = 0; k < 25; ++k) {
        RngStream sub = rng.substream(k);
        const Instance inst = support::random_finite_instance(sub);
        const EvalResult a = prophet::exact_evaluate(inst, RuleSpec::sample_max());
        const EvalResult b = prophet::exact_evaluate(inst, RuleSpec::inverse_cdf_max());
        CHECK(a.expected_payoff == doctest::Approx(b.expected_payoff).epsilon(1e-12));
        CHECK(a.surplus_part == doctest::Approx(b.surplus_part).epsilon(1e-12));
    }
}

TEST_CASE("monte carlo") {
    SUBCASE("degenerate rule has zero standard error") {
        const Instance inst({Distribution::point_mass(2)});
        const EvalResult r = prophet::monte_carlo(inst, RuleSpec::deterministic(1), 64, 5);
        CHECK(r.expected_payoff == 2.0);
        CHECK(r.payoff_se == 0.0);
    }
    SUBCASE("coin sample-max at a million trials") {
        const EvalResult r =
            prophet::monte_carlo(support::coin(), RuleSpec::sample_max(), 1000000, 42);
        CHECK(std::abs(r.expected_payoff - 0.75) <= 3.0 * r.payoff_se);
        CHECK(r.payoff_se > 0.0005);
        CHECK(r.payoff_se < 0.0015);
    }
    SUBCASE("uniform deterministic quarter") {
        const EvalResult r = prophet::monte_carlo(support::single_uniform(),
                                                  RuleSpec::deterministic(0.25), 1000000, 7);
        CHECK(std::abs(r.expected_payoff - 0.46875) <= 3.0 * r.payoff_se);
    }
    SUBCASE("per-trial decomposition holds to rounding") {
        const EvalResult r = prophet::monte_carlo(support::near_tight(),
                                                  RuleSpec::sample_max(), 20000, 9);
        CHECK(std::abs(r.expected_payoff - (r.threshold_part + r.surplus_part)) < 1e-12);
    }
    SUBCASE("bit reproducibility across calls and thread counts") {
        const Instance inst = support::near_tight();
        const EvalResult a = prophet::monte_carlo(inst, RuleSpec::sample_max(), 50000, 99, {}, 1);
        const EvalResult b = prophet::monte_carlo(inst, RuleSpec::sample_max(), 50000, 99, {}, 1);
        const EvalResult c = prophet::monte_carlo(inst, RuleSpec::sample_max(), 50000, 99, {}, 4);
        CHECK(a.expected_payoff == b.expected_payoff);
        CHECK(a.payoff_se == b.payoff_se);
        CHECK(a.expected_payoff == c.expected_payoff);
        CHECK(a.threshold_part == c.threshold_part);
        CHECK(a.surplus_part == c.surplus_part);
        CHECK(a.payoff_se == c.payoff_se);
        const EvalResult d = prophet::monte_carlo(inst, RuleSpec::sample_max(), 50000, 100);
        CHECK(d.expected_payoff != a.expected_payoff);
    }
}

TEST_CASE("monte carlo cross-validates the enumeration oracle") {
    RngStream rng(2030);
    int checked = 0;
    for (int k = 0; k < 30; ++k) {
        RngStream sub = rng.substream(k);
        const Instance inst = support::random_finite_instance(sub);
        const double hm = 0.5 * inst.expected_max();
        RngStream erng = sub.substream(78);
        const std::vector<RuleSpec> rules = {
            RuleSpec::deterministic(hm),
            RuleSpec::sample_max(),
            RuleSpec::inverse_cdf_max(),
            RuleSpec::empirical(support::empirical_maxima(inst, erng, 3)),
            RuleSpec::mixture(0.5, hm),
        };
        for (const RuleSpec& rule : rules) {
            const EvalResult ex = prophet::exact_evaluate(inst, rule);
            const EvalResult mc =
                prophet::monte_carlo(inst, rule, 40000, 1000 + k, {}, 1);
            const double tol = std::max(4.0 * mc.payoff_se, 1e-12);
            CHECK(std::abs(mc.expected_payoff - ex.expected_payoff) <= tol);
            ++checked;
        }
    }
    CHECK(checked == 150);
}

TEST_CASE("tail probability routes") {
    SUBCASE("exact from the enumeration pmf") {
        const auto t = prophet::tail_probability(support::coin(), RuleSpec::sample_max(), 1.0);
        CHECK(t.exact);
        CHECK(t.value == doctest::Approx(0.375).epsilon(1e-15));
    }
    SUBCASE("trivial bounds") {
        const auto t0 = prophet::tail_probability(support::coin(), RuleSpec::sample_max(), 0.0);
        CHECK(t0.value <= 1.0);
        const Instance pm2({Distribution::point_mass(2)});
        const auto t3 = prophet::tail_probability(pm2, RuleSpec::deterministic(1), 3.0);
        CHECK(t3.value == 0.0);
    }
    SUBCASE("deterministic rule on a continuous instance stays exact") {
        const auto t = prophet::tail_probability(support::single_uniform(),
                                                 RuleSpec::deterministic(0.25), 0.5);
        // Stops iff the value exceeds 1/4; payoff above 1/2 has mass 1/2.
        CHECK(t.exact);
        CHECK(t.value == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("monte carlo fallback for randomized rules on continuous instances") {
        const auto t = prophet::tail_probability(support::single_uniform(),
                                                 RuleSpec::sample_max(), 0.5, 200000, 3);
        CHECK(!t.exact);
        CHECK(t.se > 0.0);
        // P(payoff > 1/2) = P(stop, value > 1/2) = 3/8 for the max-law rule.
        CHECK(std::abs(t.value - 0.375) <= 4.0 * t.se);
    }
}
