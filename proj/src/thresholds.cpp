#include "prophet/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prophet {

double half_mean(const Instance& inst) {
    return 0.5 * inst.expected_max();
}

MedianResult median_of_max(const Instance& inst) {
    MedianResult r;
    r.value = inst.max_quantile(0.5);
    r.exact = std::abs(inst.exceed_prob(r.value) - 0.5) <= 1e-12;
    return r;
}

double balanced_surplus(const Instance& inst, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("balanced_surplus: tol must be positive");
    const double r0 = inst.aggregate_surplus(0.0);
    if (r0 == 0.0) return 0.0;

    double lo = 0.0;
    double hi = std::max(r0, 1.0);
    double mid = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double g = inst.aggregate_surplus(mid) - mid;
        if (std::abs(g) <= tol && hi - lo <= tol) return mid;
        if (g > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

ThresholdSet certified_interval(const Instance& inst) {
    ThresholdSet t;
    t.half_mean = half_mean(inst);
    const MedianResult med = median_of_max(inst);
    t.median = med.value;
    t.median_is_exact = med.exact;
    t.balanced = balanced_surplus(inst);
    t.certified_lo = std::min(t.median, t.half_mean);
    t.certified_hi = std::max(t.median, t.balanced);
    return t;
}

}  // namespace prophet
