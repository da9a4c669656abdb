#include "vlab/averaging.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "vlab/fft.hpp"

namespace vlab {

using std::numbers::pi;

KernelRequirement kernel_requirements(const Kernel& k, const AdvectionField& a) {
    KernelRequirement req;
    req.required_smoothness = 3; // smallest integer above 1+d, d=1
    const double r_k = 0.5 + (1.0 + a.lambda) * (1.0 + req.required_smoothness);
    req.required_decay = r_k + 0.5; // integrability margin in d=1
    req.smoothness_ok = k.smoothness_budget >= req.required_smoothness;
    req.decay_ok = k.decay_weight >= req.required_decay;
    return req;
}

namespace {

std::vector<double> simpson_weights(int n) {
    if (n < 3 || n % 2 == 0) throw config_error("simpson quadrature needs an odd node count >= 3");
    std::vector<double> w(n, 0.0);
    for (int q = 0; q < n; ++q) w[q] = (q == 0 || q == n - 1) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
    return w; // caller scales by h/3
}

} // namespace

SpatialField apply_K(const Kernel& kernel, const TimeSpatialFn& H, const AdvectionField& a,
                     double t, double v_cut, int s_steps, int v_points) {
    if (!(t >= 0.0)) throw config_error("apply_K: t must be nonnegative");
    if (v_points < 4) throw config_error("apply_K: too few velocity quadrature points");
    SpatialField probe = H(0.0);
    const int nx = probe.nx;
    SpatialField out(nx, t);
    if (t == 0.0) return out;

    const auto sw = simpson_weights(s_steps);
    const double hs = t / (s_steps - 1);
    const double dv = 2.0 * v_cut / v_points;

    std::vector<std::complex<double>> shifted(nx);
    for (int q = 0; q < s_steps; ++q) {
        const double s = q * hs;
        const SpatialField Hs = (q == 0) ? probe : H(s);
        if (Hs.nx != nx) throw config_error("apply_K: H sample changed resolution");
        auto c = fft_of_real(Hs.values.data(), nx);
        // spectral x derivative
        for (int m = 0; m < nx; ++m) {
            const double k = 2.0 * pi * signed_freq(m, nx);
            c[m] *= std::complex<double>(0.0, k);
        }
        c[nx / 2] = 0.0;
        const double ws = sw[q] * hs / 3.0;
        for (int p = 0; p < v_points; ++p) {
            const double v = -v_cut + p * dv;
            const double wv = ((p == 0 || p == v_points - 1) ? 0.5 : 1.0) * dv;
            const double shift = -(t - s) * a.eval(v);
            for (int m = 0; m < nx; ++m) {
                const int k = signed_freq(m, nx);
                shifted[m] = c[m] * std::polar(1.0, 2.0 * pi * k * shift);
            }
            fft_backward(shifted);
            for (int i = 0; i < nx; ++i) {
                const double dxh = shifted[i].real() / nx;
                out.values[i] += ws * wv * dxh *
                                 kernel.U(t, s, static_cast<double>(i) / nx, v);
            }
        }
    }
    return out;
}

std::vector<SmoothingRatioRow> smoothing_ratio(const Kernel& kernel, const AdvectionField& a,
                                               const std::vector<int>& modes, double t, int nx,
                                               double v_cut, int time_samples, int s_steps,
                                               int v_points) {
    for (int m : modes)
        if (m == 0) throw config_error("smoothing_ratio: modes must be nonzero");
    const auto tw = simpson_weights(time_samples);
    const double ht = t / (time_samples - 1);

    std::vector<SmoothingRatioRow> rows;
    rows.reserve(modes.size());
    for (int m : modes) {
        auto Hm = [&, m](double) {
            return sample_spatial(nx, [m](double x) { return std::cos(2.0 * pi * m * x); });
        };
        double num_sq = 0.0;
        for (int q = 1; q < time_samples; ++q) { // K(H)(0) = 0
            const double tau = q * ht;
            SpatialField k = apply_K(kernel, Hm, a, tau, v_cut, s_steps, v_points);
            double l2sq = 0.0;
            for (double x : k.values) l2sq += x * x;
            l2sq /= nx;
            num_sq += tw[q] * ht / 3.0 * l2sq;
        }
        const double den = std::sqrt(0.5 * t); // ||cos(2 pi m x)||_{L2(0,t;L2)}
        rows.push_back(SmoothingRatioRow{m, std::sqrt(num_sq) / den});
    }
    return rows;
}

Kernel straighten_variable(const Kernel& kernel, const AdvectionField& a) {
    Kernel out;
    out.smoothness_budget = kernel.smoothness_budget;
    out.decay_weight = kernel.decay_weight;
    out.id = kernel.id + "|straightened";
    if (a.kind == AdvectionKind::classical) {
        out.U = kernel.U;
        return out;
    }
    const double c = a.c;
    auto inner = kernel.U;
    out.U = [inner, a, c](double t, double s, double x, double w) {
        if (!(std::abs(w) < c)) return 0.0; // outside a(R)
        const double v = a.inverse(w);
        const double jac = a.deriv(v, 1); // det Da in d=1
        return inner(t, s, x, v) / jac;
    };
    return out;
}

} // namespace vlab
