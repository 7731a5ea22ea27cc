#include "prophet/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace prophet {

namespace {

constexpr double kProbDrift = 1e-12;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Distribution Distribution::point_mass(double value) {
    require(std::isfinite(value) && value >= 0.0, "point_mass: value must be finite and nonnegative");
    Distribution d;
    d.kind_ = DistKind::point_mass;
    d.p0_ = value;
    d.support_ = {value};
    d.probs_ = {1.0};
    d.cum_ = {1.0};
    return d;
}

Distribution Distribution::discrete(std::vector<double> support, std::vector<double> probs) {
    require(!support.empty(), "discrete: support must be nonempty");
    require(support.size() == probs.size(), "discrete: support and probs sizes differ");

    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });

    Distribution d;
    d.kind_ = DistKind::discrete;
    d.support_.reserve(support.size());
    d.probs_.reserve(probs.size());
    double total = 0;
    for (std::size_t idx : order) {
        const double s = support[idx];
        const double p = probs[idx];
        require(std::isfinite(s) && s >= 0.0, "discrete: support values must be finite and nonnegative");
        require(std::isfinite(p) && p > 0.0 && p <= 1.0, "discrete: probs must lie in (0, 1]");
        if (!d.support_.empty()) {
            require(s != d.support_.back(), "discrete: duplicate support point");
        }
        d.support_.push_back(s);
        d.probs_.push_back(p);
        total += p;
    }
    if (std::abs(total - 1.0) > kProbDrift) {
        std::ostringstream msg;
        msg << "discrete: probs sum to " << total << ", residual exceeds " << kProbDrift;
        throw std::invalid_argument(msg.str());
    }
    // Normalize the residual drift so downstream sums are exact.
    double cum = 0;
    d.cum_.resize(d.probs_.size());
    for (std::size_t k = 0; k < d.probs_.size(); ++k) {
        d.probs_[k] /= total;
        cum += d.probs_[k];
        d.cum_[k] = cum;
    }
    d.cum_.back() = 1.0;
    return d;
}

Distribution Distribution::uniform(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi), "uniform: bounds must be finite");
    require(lo >= 0.0, "uniform: lower bound must be nonnegative");
    require(hi > lo, "uniform: upper bound must exceed lower bound");
    Distribution d;
    d.kind_ = DistKind::uniform;
    d.p0_ = lo;
    d.p1_ = hi;
    return d;
}

Distribution Distribution::exponential(double rate) {
    require(std::isfinite(rate) && rate > 0.0, "exponential: rate must be positive and finite");
    Distribution d;
    d.kind_ = DistKind::exponential;
    d.p0_ = rate;
    return d;
}

double Distribution::cdf(double x) const {
    switch (kind_) {
        case DistKind::point_mass:
            return x >= p0_ ? 1.0 : 0.0;
        case DistKind::discrete: {
            const auto it = std::upper_bound(support_.begin(), support_.end(), x);
            return it == support_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
        }
        case DistKind::uniform:
            if (x <= p0_) return 0.0;
            if (x >= p1_) return 1.0;
            return (x - p0_) / (p1_ - p0_);
        case DistKind::exponential:
            return x <= 0.0 ? 0.0 : -std::expm1(-p0_ * x);
    }
    return 0.0;
}

double Distribution::cdf_left(double x) const {
    switch (kind_) {
        case DistKind::point_mass:
            return x > p0_ ? 1.0 : 0.0;
        case DistKind::discrete: {
            const auto it = std::lower_bound(support_.begin(), support_.end(), x);
            return it == support_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
        }
        default:
            return cdf(x);
    }
}

double Distribution::atom_at(double x) const {
    switch (kind_) {
        case DistKind::point_mass:
            return x == p0_ ? 1.0 : 0.0;
        case DistKind::discrete: {
            const auto it = std::lower_bound(support_.begin(), support_.end(), x);
            if (it != support_.end() && *it == x) {
                return probs_[static_cast<std::size_t>(it - support_.begin())];
            }
            return 0.0;
        }
        default:
            return 0.0;
    }
}

double Distribution::pdf(double x) const {
    switch (kind_) {
        case DistKind::uniform:
            return (x > p0_ && x < p1_) ? 1.0 / (p1_ - p0_) : 0.0;
        case DistKind::exponential:
            return x < 0.0 ? 0.0 : p0_ * std::exp(-p0_ * x);
        default:
            return 0.0;
    }
}

double Distribution::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("quantile: u must lie in [0, 1]");
    }
    switch (kind_) {
        case DistKind::point_mass:
            return p0_;
        case DistKind::discrete: {
            const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
            const std::size_t k = it == cum_.end() ? cum_.size() - 1
                                                   : static_cast<std::size_t>(it - cum_.begin());
            return support_[k];
        }
        case DistKind::uniform:
            return p0_ + u * (p1_ - p0_);
        case DistKind::exponential:
            if (u == 1.0) return std::numeric_limits<double>::infinity();
            return -std::log1p(-u) / p0_;
    }
    return 0.0;
}

double Distribution::partial_expectation(double t) const {
    if (!(t >= 0.0)) {
        throw std::domain_error("partial_expectation: t must be nonnegative");
    }
    switch (kind_) {
        case DistKind::point_mass:
            return p0_ > t ? p0_ - t : 0.0;
        case DistKind::discrete: {
            double total = 0;
            for (std::size_t k = support_.size(); k-- > 0;) {
                if (support_[k] <= t) break;
                total += probs_[k] * (support_[k] - t);
            }
            return total;
        }
        case DistKind::uniform:
            if (t >= p1_) return 0.0;
            if (t <= p0_) return 0.5 * (p0_ + p1_) - t;
            return (p1_ - t) * (p1_ - t) / (2.0 * (p1_ - p0_));
        case DistKind::exponential:
            return std::exp(-p0_ * t) / p0_;
    }
    return 0.0;
}

double Distribution::mean() const {
    switch (kind_) {
        case DistKind::point_mass:
            return p0_;
        case DistKind::discrete: {
            double m = 0;
            for (std::size_t k = 0; k < support_.size(); ++k) m += probs_[k] * support_[k];
            return m;
        }
        case DistKind::uniform:
            return 0.5 * (p0_ + p1_);
        case DistKind::exponential:
            return 1.0 / p0_;
    }
    return 0.0;
}

double Distribution::sample(RngStream& rng) const {
    switch (kind_) {
        case DistKind::point_mass:
            return p0_;
        case DistKind::discrete: {
            const double u = rng.uniform01();
            const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
            const std::size_t k = it == cum_.end() ? cum_.size() - 1
                                                   : static_cast<std::size_t>(it - cum_.begin());
            return support_[k];
        }
        case DistKind::uniform:
            return p0_ + rng.uniform01() * (p1_ - p0_);
        case DistKind::exponential:
            return -std::log1p(-rng.uniform01()) / p0_;
    }
    return 0.0;
}

double Distribution::upper_bound() const {
    switch (kind_) {
        case DistKind::point_mass:
            return p0_;
        case DistKind::discrete:
            return support_.back();
        case DistKind::uniform:
            return p1_;
        case DistKind::exponential:
            return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double Distribution::tail_cutoff(double eps) const {
    if (kind_ != DistKind::exponential) return upper_bound();
    const double lambda = p0_;
    double t = std::max(1.0, (std::log(1.0 / eps) + std::log1p(1.0 / lambda)) / lambda);
    while (std::exp(-lambda * t) * (1.0 + t + 1.0 / lambda) > eps) t *= 1.5;
    return t;
}

double Distribution::value() const {
    if (kind_ != DistKind::point_mass) throw std::logic_error("value(): not a point mass");
    return p0_;
}

double Distribution::lo() const {
    if (kind_ != DistKind::uniform) throw std::logic_error("lo(): not uniform");
    return p0_;
}

double Distribution::hi() const {
    if (kind_ != DistKind::uniform) throw std::logic_error("hi(): not uniform");
    return p1_;
}

double Distribution::rate() const {
    if (kind_ != DistKind::exponential) throw std::logic_error("rate(): not exponential");
    return p0_;
}

}  // namespace prophet
