#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vlab/grid.hpp"

namespace vlab::test {

inline constexpr double kPi = std::numbers::pi;

/// Random x-band-limited field with a Gaussian velocity envelope: smooth,
/// decay-certified, full-rank in both directions.
inline PhaseField random_smooth_field(const Grid& g, unsigned seed, int max_mode = 6) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    struct Term {
        double amp, phase, width, center;
        int mode;
    };
    std::vector<Term> terms;
    for (int m = 0; m <= max_mode; ++m) {
        Term t;
        t.amp = (unif(rng) - 0.5) / (1.0 + m * m);
        t.phase = 2.0 * kPi * unif(rng);
        t.width = (0.5 + 0.4 * unif(rng)) * g.v_cut / 8.0; // keeps the edge rows decayed
        t.center = (unif(rng) - 0.5) * 0.08 * g.v_cut;
        t.mode = m;
        terms.push_back(t);
    }
    return sample_phase(g, [terms](double x, double v) {
        double acc = 0.0;
        for (const auto& t : terms) {
            const double u = (v - t.center) / t.width;
            acc += t.amp * std::cos(2.0 * kPi * t.mode * x + t.phase) * std::exp(-0.5 * u * u);
        }
        return acc;
    });
}

inline double max_abs(const PhaseField& f) {
    double m = 0.0;
    for (double x : f.values) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const PhaseField& a, const PhaseField& b) {
    double m = 0.0;
    for (size_t q = 0; q < a.values.size(); ++q)
        m = std::max(m, std::abs(a.values[q] - b.values[q]));
    return m;
}

inline double max_abs_diff(const SpatialField& a, const SpatialField& b) {
    double m = 0.0;
    for (size_t q = 0; q < a.values.size(); ++q)
        m = std::max(m, std::abs(a.values[q] - b.values[q]));
    return m;
}

} // namespace vlab::test
