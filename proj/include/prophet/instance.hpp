#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "prophet/distribution.hpp"

namespace prophet {

// Distribution of the maximum of an instance: an exact pmf when every item
// has finite support, otherwise a handle exposing the CDF/quantile of the
// product CDF.
class MaxDistribution {
public:
    bool has_exact_pmf() const { return exact_; }
    std::span<const double> atoms() const { return atoms_; }
    std::span<const double> probs() const { return probs_; }

    double cdf(double x) const;
    double quantile(double u) const;

private:
    friend class Instance;
    MaxDistribution() = default;

    bool exact_ = false;
    std::vector<double> atoms_;
    std::vector<double> probs_;
    std::vector<Distribution> items_;
    double quantile_hi_ = 0;
};

// An ordered list of independent items. The order is the scan order of the
// stopping rule. Immutable after construction; safe for shared read-only use.
class Instance {
public:
    explicit Instance(std::vector<Distribution> items);

    std::size_t size() const { return items_.size(); }
    const Distribution& item(std::size_t i) const { return items_[i]; }
    const std::vector<Distribution>& items() const { return items_; }
    bool all_finite_support() const { return all_finite_; }

    // Product CDF of the maximum, P(max <= x).
    double max_cdf(double x) const;
    double max_cdf_left(double x) const;
    // P(max > tau) for tau >= 0.
    double exceed_prob(double tau) const;
    // Aggregate surplus: the sum of per-item partial expectations at tau.
    double aggregate_surplus(double tau) const;
    // E[max]; exact atom sum for finite instances, adaptive quadrature of
    // the tail integral otherwise (absolute tolerance 1e-10).
    double expected_max() const;
    // E[(max - tau)^+].
    double max_partial_expectation(double tau) const;
    // Generalized inverse of the product CDF.
    double max_quantile(double u) const;
    MaxDistribution max_distribution() const;

    // |sum_i (1 - F_i(x)) prod_{j<i} F_j(x) - (1 - F(x))|; the two sides are
    // algebraically equal, so this measures only rounding.
    double telescope_residual(double x) const;

    // Atoms of the maximum with their jumps F(a) - F(a-), positive entries
    // only. For finite instances this is the exact pmf.
    std::vector<std::pair<double, double>> max_atoms() const;
    // Density of the absolutely continuous part of the law of the maximum.
    double max_continuous_density(double x) const;

    // Sorted distinct atoms over all items.
    const std::vector<double>& atom_union() const { return atom_union_; }
    // Atoms plus uniform endpoints: the points across which the product CDF
    // is not smooth.
    std::vector<double> quadrature_breakpoints() const;
    // T with sum_i [(1 - F_i(T)) (1 + T) + E[(X_i - T)^+]] <= eps.
    double tail_cutoff(double eps) const;

private:
    std::vector<Distribution> items_;
    bool all_finite_ = true;
    std::vector<double> atom_union_;
    std::vector<double> pmf_atoms_;  // finite instances only
    std::vector<double> pmf_probs_;
    std::vector<double> pmf_cum_;
    double quantile_hi_ = 0;
};

// Default evaluation grid: all item atoms, midpoints between consecutive
// atoms, zero, and (when continuous items are present) 50 quantile-spaced
// points of the product CDF.
std::vector<double> default_grid(const Instance& inst);

}  // namespace prophet
