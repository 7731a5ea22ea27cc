#pragma once

#include <functional>
#include <span>

namespace prophet {

struct QuadratureResult {
    double value = 0;
    double error_estimate = 0;
};

// Adaptive Simpson on [a, b] with an absolute tolerance. Never throws; the
// achieved error estimate is returned alongside the value.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol,
                                  int max_depth = 48);

// Integrates f over [a, b], splitting at the supplied breakpoints so each
// piece is smooth. Throws NumericError when the summed error estimate
// exceeds abs_tol.
double integrate_piecewise(const std::function<double(double)>& f,
                           double a, double b,
                           std::span<const double> breakpoints,
                           double abs_tol);

}  // namespace prophet
