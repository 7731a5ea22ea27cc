#pragma once

// Shared fixtures for the unit and acceptance suites: the worked instances,
// a seeded generator of small random instances, and a Kolmogorov-Smirnov
// statistic for sampling checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "prophet/engine.hpp"
#include "prophet/instance.hpp"
#include "prophet/rng.hpp"
#include "prophet/rules.hpp"

namespace support {

// Single item worth 2 with probability one half, else 0.
inline prophet::Instance coin() {
    return prophet::Instance({prophet::Distribution::discrete({0.0, 2.0}, {0.5, 0.5})});
}

// Point mass 1 followed by a 1% shot at 100: the instance where the best
// threshold rule earns barely more than half the prophet.
inline prophet::Instance near_tight() {
    return prophet::Instance({prophet::Distribution::point_mass(1.0),
                              prophet::Distribution::discrete({0.0, 100.0}, {0.99, 0.01})});
}

inline prophet::Instance single_uniform() {
    return prophet::Instance({prophet::Distribution::uniform(0.0, 1.0)});
}

inline prophet::Instance two_uniform() {
    return prophet::Instance({prophet::Distribution::uniform(0.0, 1.0),
                              prophet::Distribution::uniform(0.0, 1.0)});
}

inline prophet::Distribution scaled(const prophet::Distribution& d, double c) {
    using prophet::DistKind;
    using prophet::Distribution;
    switch (d.kind()) {
        case DistKind::point_mass:
            return Distribution::point_mass(c * d.value());
        case DistKind::discrete: {
            std::vector<double> support(d.support().begin(), d.support().end());
            for (double& s : support) s *= c;
            return Distribution::discrete(std::move(support),
                                          {d.probs().begin(), d.probs().end()});
        }
        case DistKind::uniform:
            return Distribution::uniform(c * d.lo(), c * d.hi());
        case DistKind::exponential:
            return Distribution::exponential(d.rate() / c);
    }
    return d;
}

inline prophet::Instance scaled(const prophet::Instance& inst, double c) {
    std::vector<prophet::Distribution> items;
    items.reserve(inst.size());
    for (const auto& d : inst.items()) items.push_back(scaled(d, c));
    return prophet::Instance(std::move(items));
}

// Atom values drawn from a half-integer lattice most of the time so that
// atoms collide across items and with threshold draws, exercising ties.
inline double random_atom(prophet::RngStream& rng) {
    if (rng.below(2) == 0) {
        return 0.5 * static_cast<double>(rng.below(21));
    }
    return std::round(rng.uniform01() * 10.0 * 1000.0) / 1000.0;
}

// Random finite instance: 1..4 items, each a point mass or a discrete
// distribution with 2..3 atoms, values in [0, 10].
inline prophet::Instance random_finite_instance(prophet::RngStream& rng) {
    using prophet::Distribution;
    const std::size_t n = 1 + rng.below(4);
    std::vector<Distribution> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.below(5) == 0) {
            items.push_back(Distribution::point_mass(random_atom(rng)));
            continue;
        }
        const std::size_t m = 2 + rng.below(2);
        std::vector<double> support;
        while (support.size() < m) {
            const double a = random_atom(rng);
            if (std::find(support.begin(), support.end(), a) == support.end()) {
                support.push_back(a);
            }
        }
        std::sort(support.begin(), support.end());
        std::vector<double> probs(m);
        double total = 0;
        for (double& p : probs) {
            p = 0.1 + rng.uniform01();
            total += p;
        }
        for (double& p : probs) p /= total;
        items.push_back(Distribution::discrete(std::move(support), std::move(probs)));
    }
    return prophet::Instance(std::move(items));
}

// Random instance over all four kinds.
inline prophet::Instance random_any_instance(prophet::RngStream& rng) {
    using prophet::Distribution;
    const std::size_t n = 1 + rng.below(3);
    std::vector<Distribution> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (rng.below(4)) {
            case 0:
                items.push_back(Distribution::point_mass(random_atom(rng)));
                break;
            case 1: {
                const double lo = 2.0 * rng.uniform01();
                items.push_back(Distribution::uniform(lo, lo + 0.5 + 2.0 * rng.uniform01()));
                break;
            }
            case 2:
                items.push_back(Distribution::exponential(0.25 + 2.0 * rng.uniform01()));
                break;
            default: {
                prophet::Instance one = random_finite_instance(rng);
                items.push_back(one.item(0));
                break;
            }
        }
    }
    return prophet::Instance(std::move(items));
}

inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

// Draws a few genuine maxima for empirical rules.
inline std::vector<double> empirical_maxima(const prophet::Instance& inst,
                                            prophet::RngStream& rng, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        prophet::RngStream sub = rng.substream(k);
        out.push_back(prophet::sample_threshold(prophet::RuleSpec::sample_max(), inst, sub));
    }
    return out;
}

}  // namespace support
