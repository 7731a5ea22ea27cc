#pragma once

#include "prophet/instance.hpp"

namespace prophet {

// The named deterministic thresholds and the certified interval around them.
struct ThresholdSet {
    double half_mean = 0;
    double median = 0;
    bool median_is_exact = false;  // whether P(max > median) is exactly 1/2
    double balanced = 0;           // fixed point of tau = R(tau)
    double certified_lo = 0;       // min(median, half_mean)
    double certified_hi = 0;       // max(median, balanced)
};

struct MedianResult {
    double value = 0;
    bool exact = false;
};

// Half of E[max].
double half_mean(const Instance& inst);

// Generalized median of the maximum, inf{x : F(x) >= 1/2}, with a flag for
// whether the exceedance probability there is exactly 1/2 (always true for
// continuous product CDFs; may fail at atoms).
MedianResult median_of_max(const Instance& inst);

// The unique fixed point of tau = R(tau), located by bisection: R - id is
// strictly decreasing, so bisection is unconditionally safe (Newton is not,
// since R has kinks at atoms). Returns tau with |R(tau) - tau| <= tol and
// bracket width <= tol. Degenerate all-zero instances return 0.
double balanced_surplus(const Instance& inst, double tol = 1e-12);

ThresholdSet certified_interval(const Instance& inst);

}  // namespace prophet
