#include "prophet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "prophet/errors.hpp"

namespace prophet {

namespace {

struct SimpsonWorker {
    const std::function<double(double)>& f;
    double err = 0;

    double recurse(double a, double m, double b,
                   double fa, double fm, double fb,
                   double whole, double tol, int depth) {
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
            if (depth <= 0) err += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return recurse(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol,
                                  int max_depth) {
    if (!(b > a)) return {0.0, 0.0};
    SimpsonWorker worker{f};
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double value = worker.recurse(a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
    return {value, worker.err};
}

double integrate_piecewise(const std::function<double(double)>& f,
                           double a, double b,
                           std::span<const double> breakpoints,
                           double abs_tol) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a, b};
    for (double x : breakpoints) {
        if (x > a && x < b) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double seg_tol = abs_tol / static_cast<double>(cuts.size() - 1);
    double total = 0;
    double err = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const QuadratureResult r = adaptive_simpson(f, cuts[k], cuts[k + 1], seg_tol);
        total += r.value;
        err += r.error_estimate;
    }
    if (err > abs_tol) {
        std::ostringstream msg;
        msg << "quadrature failed to meet tolerance " << abs_tol
            << " (achieved error bound " << err << ")";
        throw NumericError(msg.str());
    }
    return total;
}

}  // namespace prophet
