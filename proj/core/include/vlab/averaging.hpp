#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vlab/grid.hpp"
#include "vlab/models.hpp"

namespace vlab {

/// Kernel U(t,s,x,v) of the velocity-averaged time integral operator,
/// together with its certified smoothness and decay metadata.
struct Kernel {
    std::function<double(double t, double s, double x, double v)> U;
    int smoothness_budget = 0;  ///< derivatives of U the supplier guarantees
    double decay_weight = 0.0;  ///< sigma: |U| (1+v^2)^(sigma/2) bounded
    std::string id;
};

/// Smoothness/decay demanded by the no-loss estimate (d=1) versus what the
/// kernel certifies.
struct KernelRequirement {
    int required_smoothness = 3;  ///< k > 1+d with d=1
    double required_decay = 0.0;  ///< r_k + 1/2 with r_k = 1/2 + (1+lambda)(1+k)
    bool smoothness_ok = false;
    bool decay_ok = false;
};

KernelRequirement kernel_requirements(const Kernel& k, const AdvectionField& a);

/// Time-indexed spatial field: s -> H(s, .) sampled on the x grid.
using TimeSpatialFn = std::function<SpatialField(double s)>;

/// The averaged operator
///   K(H)(t,x) = int_0^t int (dH/dx)(s, x - (t-s) a(v)) U(t,s,x,v) dv ds.
/// Composite Simpson in s (s_steps odd), trapezoid over the velocity window
/// [-v_cut, v_cut) with v_points nodes; the x derivative is spectral and the
/// shifted evaluation is an exact Fourier phase.
SpatialField apply_K(const Kernel& kernel, const TimeSpatialFn& H, const AdvectionField& a,
                     double t, double v_cut, int s_steps = 129, int v_points = 256);

/// Boundedness probe: for each mode m, the ratio
///   ||K(H_m)||_{L2(0,t;L2)} / ||H_m||_{L2(0,t;L2)},  H_m(s,x) = cos(2 pi m x).
/// The time L2 norm uses composite Simpson over time_samples nodes.
struct SmoothingRatioRow {
    int mode;
    double ratio;
};
std::vector<SmoothingRatioRow> smoothing_ratio(const Kernel& kernel, const AdvectionField& a,
                                               const std::vector<int>& modes, double t, int nx,
                                               double v_cut, int time_samples = 17,
                                               int s_steps = 129, int v_points = 256);

/// Change of variables w = a(v): returns the kernel
///   U'(t,s,x,w) = U(t,s,x,a^-1(w)) |det Da(a^-1(w))|^-1
/// supported on a(R) (zero outside). Composing apply_K with the classical
/// advection on the transformed kernel reproduces apply_K on the original.
Kernel straighten_variable(const Kernel& kernel, const AdvectionField& a);

} // namespace vlab
