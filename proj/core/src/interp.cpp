#include "vlab/interp.hpp"

#include <algorithm>
#include <cmath>

#include "vlab/calculus.hpp"

namespace vlab {

namespace {

double limit_slope(double raw, double left_secant, double right_secant) {
    if (left_secant * right_secant < 0.0) {
        // Interior data extremum: no monotonicity to preserve here, so keep
        // the high-order slope (a zeroed slope would cost two orders of
        // accuracy at smooth extrema); only cap runaway magnitudes.
        const double cap = 3.0 * std::max(std::abs(left_secant), std::abs(right_secant));
        return std::clamp(raw, -cap, cap);
    }
    if (left_secant * right_secant == 0.0) {
        // Flat transition: the node borders exactly constant data. Zero the
        // slope so compactly supported profiles neither creep nor change
        // sign across their support edge.
        return 0.0;
    }
    const double sign = right_secant > 0.0 ? 1.0 : -1.0;
    if (raw * sign <= 0.0) raw = 0.5 * (left_secant + right_secant);
    const double cap = 3.0 * std::min(std::abs(left_secant), std::abs(right_secant));
    return sign * std::min(std::abs(raw), cap);
}

double limit_edge_slope(double raw, double secant) {
    if (secant == 0.0) return 0.0;
    const double sign = secant > 0.0 ? 1.0 : -1.0;
    if (raw * sign <= 0.0) return 0.0;
    return sign * std::min(std::abs(raw), 3.0 * std::abs(secant));
}

double hermite(double y0, double s0, double y1, double s1, double h, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return y0 * (2 * t3 - 3 * t2 + 1) + s0 * h * (t3 - 2 * t2 + t) + y1 * (-2 * t3 + 3 * t2) +
           s1 * h * (t3 - t2);
}

} // namespace

bool strictly_increasing(const std::vector<double>& xs) {
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) return false;
    return true;
}

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
        throw config_error("monotone cubic: need >= 2 matched nodes");
    if (!strictly_increasing(xs_)) throw config_error("monotone cubic: nodes must increase");
    build_slopes();
}

MonotoneCubic MonotoneCubic::periodic(std::vector<double> xs, std::vector<double> ys,
                                      double period, double value_shift) {
    MonotoneCubic m;
    m.xs_ = std::move(xs);
    m.ys_ = std::move(ys);
    if (m.xs_.size() != m.ys_.size() || m.xs_.size() < 2)
        throw config_error("monotone cubic: need >= 2 matched nodes");
    if (!strictly_increasing(m.xs_)) throw config_error("monotone cubic: nodes must increase");
    if (!(m.xs_.back() - m.xs_.front() < period))
        throw config_error("monotone cubic: nodes span more than one period");
    m.periodic_ = true;
    m.period_ = period;
    m.value_shift_ = value_shift;
    m.build_slopes();
    return m;
}

void MonotoneCubic::build_slopes() {
    const int n = static_cast<int>(xs_.size());
    slopes_.assign(n, 0.0);

    auto node_x = [&](int i) {
        int k = 0;
        while (i < 0) { i += n; --k; }
        while (i >= n) { i -= n; ++k; }
        return xs_[i] + k * period_;
    };
    auto node_y = [&](int i) {
        int k = 0;
        while (i < 0) { i += n; --k; }
        while (i >= n) { i -= n; ++k; }
        return ys_[i] + k * value_shift_;
    };
    auto secant = [&](int i) { // between nodes i and i+1 (wrapped if periodic)
        return (node_y(i + 1) - node_y(i)) / (node_x(i + 1) - node_x(i));
    };

    for (int i = 0; i < n; ++i) {
        int lo = i - 2, hi = i + 2;
        if (!periodic_) {
            lo = std::max(0, std::min(lo, n - 5));
            hi = lo + 4;
            if (hi > n - 1) { hi = n - 1; lo = std::max(0, hi - 4); }
        }
        std::vector<double> sx, sy;
        for (int q = lo; q <= hi; ++q) {
            sx.push_back(node_x(q));
            sy.push_back(node_y(q));
        }
        const auto w = fd_weights(node_x(i), sx, 1);
        double raw = 0.0;
        for (size_t q = 0; q < w.size(); ++q) raw += w[q] * sy[q];

        if (periodic_) {
            slopes_[i] = limit_slope(raw, secant(i - 1), secant(i));
        } else if (i == 0) {
            slopes_[i] = limit_edge_slope(raw, secant(0));
        } else if (i == n - 1) {
            slopes_[i] = limit_edge_slope(raw, secant(n - 2));
        } else {
            slopes_[i] = limit_slope(raw, secant(i - 1), secant(i));
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    const int n = static_cast<int>(xs_.size());
    double shift = 0.0;
    if (periodic_) {
        const double span_start = xs_.front();
        double k = std::floor((x - span_start) / period_);
        x -= k * period_;
        shift = k * value_shift_;
        // x now in [xs_[0], xs_[0] + period)
        if (x >= xs_.back()) {
            const double h = xs_.front() + period_ - xs_.back();
            const double t = (x - xs_.back()) / h;
            return shift +
                   hermite(ys_.back(), slopes_.back(), ys_.front() + value_shift_, slopes_.front(),
                           h, t);
        }
    } else {
        if (x <= xs_.front()) return ys_.front() + slopes_.front() * (x - xs_.front());
        if (x >= xs_.back()) return ys_.back() + slopes_.back() * (x - xs_.back());
    }
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const int idx = std::max(0, static_cast<int>(it - xs_.begin()) - 1);
    const int i1 = std::min(idx + 1, n - 1);
    const double h = xs_[i1] - xs_[idx];
    const double t = h > 0.0 ? (x - xs_[idx]) / h : 0.0;
    return shift + hermite(ys_[idx], slopes_[idx], ys_[i1], slopes_[i1], h, t);
}

MonotoneCubic invert_monotone_samples(const std::vector<double>& v_nodes,
                                      const std::vector<double>& w_values, const char* what) {
    if (!strictly_increasing(w_values))
        throw diffeo_error(std::string(what) + ": sampled map is not strictly monotone");
    return MonotoneCubic(w_values, v_nodes);
}

namespace {

double window_slope(const double g[6], int k) {
    double raw;
    if (k >= 2 && k <= 3) {
        raw = (g[k - 2] - 8.0 * g[k - 1] + 8.0 * g[k + 1] - g[k + 2]) / 12.0;
    } else if (k >= 1 && k <= 4) {
        raw = 0.5 * (g[k + 1] - g[k - 1]);
    } else if (k == 0) {
        raw = g[1] - g[0];
    } else {
        raw = g[5] - g[4];
    }
    const double left = (k >= 1) ? g[k] - g[k - 1] : g[k + 1] - g[k];
    const double right = (k <= 4) ? g[k + 1] - g[k] : g[k] - g[k - 1];
    return limit_slope(raw, left, right);
}

} // namespace

double window_cubic(const double g[6], int bracket, double s) {
    const int b = std::clamp(bracket, 0, 4);
    const double s0 = window_slope(g, b);
    const double s1 = window_slope(g, b + 1);
    return hermite(g[b], s0, g[b + 1], s1, 1.0, s);
}

} // namespace vlab
