#pragma once

#include <span>
#include <vector>

#include "prophet/rng.hpp"

namespace prophet {

enum class DistKind { point_mass, discrete, uniform, exponential };

// One independent nonnegative value model with exact CDF, generalized
// quantile, mean, partial expectation E[(X-t)^+], and sampling.
//
// Immutable after construction; safe for shared read-only use across
// threads. Sampling takes an explicit stream handle.
class Distribution {
public:
    static Distribution point_mass(double value);
    static Distribution discrete(std::vector<double> support, std::vector<double> probs);
    static Distribution uniform(double lo, double hi);
    static Distribution exponential(double rate);

    DistKind kind() const { return kind_; }

    // P(X <= x); right-continuous, defined for all real x.
    double cdf(double x) const;
    // P(X < x), the left limit of the CDF.
    double cdf_left(double x) const;
    // P(X == x); nonzero only for the finite-support kinds.
    double atom_at(double x) const;
    // Density of the continuous kinds; 0 for point_mass/discrete.
    double pdf(double x) const;
    // Generalized inverse inf{x : F(x) >= u}, u in [0, 1].
    double quantile(double u) const;
    // E[(X - t)^+] for t >= 0, in closed form.
    double partial_expectation(double t) const;
    double mean() const;
    double sample(RngStream& rng) const;

    bool finite_support() const {
        return kind_ == DistKind::point_mass || kind_ == DistKind::discrete;
    }
    std::span<const double> support() const { return support_; }
    std::span<const double> probs() const { return probs_; }

    // Supremum of the support (+inf for exponential).
    double upper_bound() const;
    // T such that (1 - F(T)) * (1 + T) + E[(X - T)^+] <= eps.
    double tail_cutoff(double eps) const;

    double value() const;  // point_mass
    double lo() const;     // uniform
    double hi() const;     // uniform
    double rate() const;   // exponential

private:
    Distribution() = default;

    DistKind kind_ = DistKind::point_mass;
    double p0_ = 0;  // value | lo | rate
    double p1_ = 0;  // hi (uniform)
    std::vector<double> support_;
    std::vector<double> probs_;
    std::vector<double> cum_;  // cumulative probs, last entry exactly 1
};

}  // namespace prophet
