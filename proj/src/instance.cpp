#include "prophet/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "prophet/quadrature.hpp"

namespace prophet {

namespace {

// Generalized inverse of a nondecreasing right-continuous function by
// bisection, refined until the bracket collapses to adjacent doubles.
// Maintains F(hi) >= u and F(lo) < u.
template <typename F>
double bisect_quantile(const F& cdf, double lo, double hi, double u) {
    if (cdf(lo) >= u) return lo;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) >= u) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

double MaxDistribution::cdf(double x) const {
    double f = 1.0;
    for (const auto& d : items_) f *= d.cdf(x);
    return f;
}

double MaxDistribution::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("MaxDistribution::quantile: u must lie in [0, 1]");
    }
    if (exact_) {
        double cum = 0;
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            cum += probs_[k];
            if (cum >= u) return atoms_[k];
        }
        return atoms_.back();
    }
    double hi = quantile_hi_;
    if (u == 1.0 && cdf(hi) < 1.0) return std::numeric_limits<double>::infinity();
    while (cdf(hi) < u) hi *= 2.0;
    return bisect_quantile([this](double x) { return cdf(x); }, 0.0, hi, u);
}

Instance::Instance(std::vector<Distribution> items) : items_(std::move(items)) {
    if (items_.empty()) throw std::invalid_argument("Instance: needs at least one item");
    for (const auto& d : items_) {
        if (!d.finite_support()) all_finite_ = false;
        for (double a : d.support()) atom_union_.push_back(a);
    }
    std::sort(atom_union_.begin(), atom_union_.end());
    atom_union_.erase(std::unique(atom_union_.begin(), atom_union_.end()), atom_union_.end());

    if (all_finite_) {
        for (double a : atom_union_) {
            const double jump = max_cdf(a) - max_cdf_left(a);
            if (jump > 0.0) {
                pmf_atoms_.push_back(a);
                pmf_probs_.push_back(jump);
            }
        }
        double cum = 0;
        pmf_cum_.resize(pmf_probs_.size());
        for (std::size_t k = 0; k < pmf_probs_.size(); ++k) {
            cum += pmf_probs_[k];
            pmf_cum_[k] = cum;
        }
        quantile_hi_ = pmf_atoms_.empty() ? 0.0 : pmf_atoms_.back();
    } else {
        quantile_hi_ = tail_cutoff(1e-13);
    }
}

double Instance::max_cdf(double x) const {
    double f = 1.0;
    for (const auto& d : items_) {
        f *= d.cdf(x);
        if (f == 0.0) return 0.0;
    }
    return f;
}

double Instance::max_cdf_left(double x) const {
    double f = 1.0;
    for (const auto& d : items_) {
        f *= d.cdf_left(x);
        if (f == 0.0) return 0.0;
    }
    return f;
}

double Instance::exceed_prob(double tau) const {
    if (!(tau >= 0.0)) throw std::domain_error("exceed_prob: tau must be nonnegative");
    return 1.0 - max_cdf(tau);
}

double Instance::aggregate_surplus(double tau) const {
    if (!(tau >= 0.0)) throw std::domain_error("aggregate_surplus: tau must be nonnegative");
    double r = 0;
    for (const auto& d : items_) r += d.partial_expectation(tau);
    return r;
}

double Instance::expected_max() const {
    if (all_finite_) {
        double e = 0;
        for (std::size_t k = 0; k < pmf_atoms_.size(); ++k) e += pmf_atoms_[k] * pmf_probs_[k];
        return e;
    }
    const double hi = tail_cutoff(1e-13);
    const auto cuts = quadrature_breakpoints();
    return integrate_piecewise([this](double x) { return 1.0 - max_cdf(x); },
                               0.0, hi, cuts, 1e-10);
}

double Instance::max_partial_expectation(double tau) const {
    if (!(tau >= 0.0)) throw std::domain_error("max_partial_expectation: tau must be nonnegative");
    if (all_finite_) {
        double e = 0;
        for (std::size_t k = pmf_atoms_.size(); k-- > 0;) {
            if (pmf_atoms_[k] <= tau) break;
            e += pmf_probs_[k] * (pmf_atoms_[k] - tau);
        }
        return e;
    }
    const double hi = tail_cutoff(1e-13);
    if (tau >= hi) return 0.0;
    const auto cuts = quadrature_breakpoints();
    return integrate_piecewise([this](double x) { return 1.0 - max_cdf(x); },
                               tau, hi, cuts, 1e-10);
}

double Instance::max_quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("max_quantile: u must lie in [0, 1]");
    }
    if (all_finite_) {
        const auto it = std::lower_bound(pmf_cum_.begin(), pmf_cum_.end(), u);
        const std::size_t k = it == pmf_cum_.end() ? pmf_cum_.size() - 1
                                                   : static_cast<std::size_t>(it - pmf_cum_.begin());
        return pmf_atoms_[k];
    }
    double hi = quantile_hi_;
    if (u == 1.0 && max_cdf(hi) < 1.0) return std::numeric_limits<double>::infinity();
    while (max_cdf(hi) < u) hi *= 2.0;
    return bisect_quantile([this](double x) { return max_cdf(x); }, 0.0, hi, u);
}

MaxDistribution Instance::max_distribution() const {
    MaxDistribution m;
    m.exact_ = all_finite_;
    m.items_ = items_;
    m.quantile_hi_ = quantile_hi_ == 0.0 ? 1.0 : quantile_hi_;
    if (all_finite_) {
        m.atoms_ = pmf_atoms_;
        m.probs_ = pmf_probs_;
    }
    return m;
}

double Instance::telescope_residual(double x) const {
    double reach = 1.0;
    double lhs = 0.0;
    for (const auto& d : items_) {
        const double f = d.cdf(x);
        lhs += (1.0 - f) * reach;
        reach *= f;
    }
    const double rhs = 1.0 - reach;
    return std::abs(lhs - rhs);
}

std::vector<std::pair<double, double>> Instance::max_atoms() const {
    std::vector<std::pair<double, double>> out;
    if (all_finite_) {
        out.reserve(pmf_atoms_.size());
        for (std::size_t k = 0; k < pmf_atoms_.size(); ++k) {
            out.emplace_back(pmf_atoms_[k], pmf_probs_[k]);
        }
        return out;
    }
    for (double a : atom_union_) {
        const double jump = max_cdf(a) - max_cdf_left(a);
        if (jump > 0.0) out.emplace_back(a, jump);
    }
    return out;
}

double Instance::max_continuous_density(double x) const {
    double f = 0;
    for (std::size_t l = 0; l < items_.size(); ++l) {
        const double pl = items_[l].pdf(x);
        if (pl == 0.0) continue;
        double prod = pl;
        for (std::size_t m = 0; m < items_.size(); ++m) {
            if (m != l) prod *= items_[m].cdf(x);
        }
        f += prod;
    }
    return f;
}

std::vector<double> Instance::quadrature_breakpoints() const {
    std::vector<double> cuts = atom_union_;
    for (const auto& d : items_) {
        if (d.kind() == DistKind::uniform) {
            cuts.push_back(d.lo());
            cuts.push_back(d.hi());
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

double Instance::tail_cutoff(double eps) const {
    const double per_item = eps / static_cast<double>(items_.size());
    double t = 0;
    for (const auto& d : items_) t = std::max(t, d.tail_cutoff(per_item));
    return t;
}

std::vector<double> default_grid(const Instance& inst) {
    std::vector<double> grid{0.0};
    const auto& atoms = inst.atom_union();
    for (double a : atoms) grid.push_back(a);
    for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
        grid.push_back(0.5 * (atoms[k] + atoms[k + 1]));
    }
    if (!inst.all_finite_support()) {
        for (int k = 1; k <= 50; ++k) {
            grid.push_back(inst.max_quantile((k - 0.5) / 50.0));
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

}  // namespace prophet
