#pragma once

#include <vector>

#include "vlab/errors.hpp"

namespace vlab {

/// Monotone cubic Hermite interpolant on strictly increasing nodes.
///
/// Node slopes come from 4th-order finite differences and are then limited
/// Fritsch-Carlson style: zero where adjacent secants disagree in sign,
/// clamped to 3x the smaller neighboring secant otherwise. The interpolant
/// is monotone wherever the data is monotone, and where the data is smooth
/// and the limiter inactive it retains the accuracy of the cubic slopes.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;

    /// Plain interpolant. xs strictly increasing, same length as ys.
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys);

    /// Periodic interpolant: data describes one period; x wraps with the
    /// given period and the value gains value_shift per period traversed
    /// (value_shift = period for the identity-like circle maps, 0 for
    /// plain periodic data).
    static MonotoneCubic periodic(std::vector<double> xs, std::vector<double> ys,
                                  double period, double value_shift);

    double operator()(double x) const;

    const std::vector<double>& nodes() const { return xs_; }

  private:
    std::vector<double> xs_, ys_, slopes_;
    bool periodic_ = false;
    double period_ = 0.0, value_shift_ = 0.0;

    void build_slopes();
};

/// Strictly-increasing check used before any inversion.
bool strictly_increasing(const std::vector<double>& xs);

/// Interpolant of the inverse relation of a sampled strictly monotone map
/// v -> w: returns g with g(w) ~= v. Throws diffeo_error if the samples are
/// not strictly monotone.
MonotoneCubic invert_monotone_samples(const std::vector<double>& v_nodes,
                                      const std::vector<double>& w_values,
                                      const char* what);

/// Local monotone-cubic evaluation on a uniform window of 6 consecutive
/// values: interpolates between g[bracket] and g[bracket+1] at fractional
/// position s in [0,1]. Node slopes use the 4th-order 5-point stencil where
/// the window allows and degrade gracefully at its ends; both are limited
/// as in MonotoneCubic.
double window_cubic(const double g[6], int bracket, double s);

} // namespace vlab
