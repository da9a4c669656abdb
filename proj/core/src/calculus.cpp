#include "vlab/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "vlab/fft.hpp"

namespace vlab {

using std::numbers::pi;

std::vector<double> fd_weights(double z, const std::vector<double>& xs, int m) {
    // Fornberg's recurrence for finite-difference weights on arbitrary nodes.
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

PhaseField spectral_dx(const PhaseField& f, int k) {
    if (k < 0) throw config_error("spectral_dx: negative derivative order");
    if (k == 0) return f;
    const int nx = f.grid.nx, nv = f.grid.nv;
    PhaseField out(f.grid, f.time);
    out.notes = f.notes;
    std::vector<std::complex<double>> mult(nx);
    for (int m = 0; m < nx; ++m) {
        const std::complex<double> iw(0.0, 2.0 * pi * signed_freq(m, nx));
        std::complex<double> p = 1.0;
        for (int q = 0; q < k; ++q) p *= iw;
        mult[m] = p / static_cast<double>(nx);
    }
    if (k % 2 == 1) mult[nx / 2] = 0.0; // keep odd derivatives of real data real
    std::vector<std::complex<double>> buf(nx);
    for (int j = 0; j < nv; ++j) {
        const double* src = f.row(j);
        for (int i = 0; i < nx; ++i) buf[i] = src[i];
        fft_forward(buf);
        for (int m = 0; m < nx; ++m) buf[m] *= mult[m];
        fft_backward(buf);
        double* dst = out.row(j);
        for (int i = 0; i < nx; ++i) dst[i] = buf[i].real();
    }
    return out;
}

namespace {

// Order-4 stencil widths: centered in the interior, shifted (still order 4)
// where the centered window would clip the v boundary.
int centered_width(int k) { return k + 4 - (k % 2 == 0 ? 1 : 0); }
int boundary_width(int k) { return k + 4; }

struct Stencil {
    int start;
    std::vector<double> w;
};

Stencil row_stencil(int j, int nv, int k, double dv) {
    const int wc = centered_width(k);
    const int hc = (wc - 1) / 2;
    int width, start;
    if (j - hc >= 0 && j + hc < nv) {
        width = wc;
        start = j - hc;
    } else {
        width = std::min(boundary_width(k), nv);
        start = std::clamp(j - width / 2, 0, nv - width);
    }
    std::vector<double> xs(width);
    for (int q = 0; q < width; ++q) xs[q] = (start + q - j) * dv;
    return Stencil{start, fd_weights(0.0, xs, k)};
}

} // namespace

PhaseField fd_dv(const PhaseField& f, int k) {
    if (k < 0) throw config_error("fd_dv: negative derivative order");
    if (k == 0) return f;
    const int nx = f.grid.nx, nv = f.grid.nv;
    if (boundary_width(k) > nv) throw config_error("fd_dv: grid too coarse for requested order");
    PhaseField out(f.grid, f.time);
    out.notes = f.notes;
    if (decay_certificate(f) > kDecayTolerance)
        out.notes.push_back("fd_dv: boundary-decay invariant violated; edge rows untrusted");

    const int wc = centered_width(k);
    const int hc = (wc - 1) / 2;
    const Stencil interior = row_stencil(hc, nv, k, f.grid.dv);
    for (int j = 0; j < nv; ++j) {
        const Stencil local = (j >= hc && j < nv - hc) ? Stencil{j - hc, interior.w}
                                                       : row_stencil(j, nv, k, f.grid.dv);
        double* dst = out.row(j);
        std::fill(dst, dst + nx, 0.0);
        for (size_t q = 0; q < local.w.size(); ++q) {
            const double wgt = local.w[q];
            const double* src = f.row(local.start + static_cast<int>(q));
            for (int i = 0; i < nx; ++i) dst[i] += wgt * src[i];
        }
    }
    return out;
}

double integrate_phase(const PhaseField& f) {
    const int nx = f.grid.nx, nv = f.grid.nv;
    double acc = 0.0;
    for (int j = 0; j < nv; ++j) {
        const double* row = f.row(j);
        double s = 0.0;
        for (int i = 0; i < nx; ++i) s += row[i];
        acc += (j == 0 || j == nv - 1) ? 0.5 * s : s;
    }
    return acc * f.grid.dx * f.grid.dv;
}

double integrate_spatial(const SpatialField& f) {
    double s = 0.0;
    for (double x : f.values) s += x;
    return s / f.nx;
}

namespace {

void check_budget(const Grid& g, int k) {
    if (k < 0) throw config_error("norm order must be nonnegative");
    if (k > g.nv / 8 || k > g.nx / 8)
        throw config_error("norm order exceeds the derivative budget of the grid (k > n/8)");
}

double weighted_l2_sq(const PhaseField& f, double r) {
    const int nx = f.grid.nx, nv = f.grid.nv;
    double acc = 0.0;
    for (int j = 0; j < nv; ++j) {
        const double v = f.grid.v(j);
        const double w = std::pow(1.0 + v * v, r) * ((j == 0 || j == nv - 1) ? 0.5 : 1.0);
        const double* row = f.row(j);
        double s = 0.0;
        for (int i = 0; i < nx; ++i) s += row[i] * row[i];
        acc += w * s;
    }
    return acc * f.grid.dx * f.grid.dv;
}

double weighted_max(const PhaseField& f, double r) {
    const int nx = f.grid.nx, nv = f.grid.nv;
    double best = 0.0;
    for (int j = 0; j < nv; ++j) {
        const double v = f.grid.v(j);
        const double w = std::pow(1.0 + v * v, r / 2.0);
        const double* row = f.row(j);
        for (int i = 0; i < nx; ++i) best = std::max(best, w * std::abs(row[i]));
    }
    return best;
}

} // namespace

double weighted_sobolev_norm(const PhaseField& f, int k, double r) {
    check_budget(f.grid, k);
    double acc = 0.0;
    for (int a = 0; a <= k; ++a) {
        const PhaseField dxa = spectral_dx(f, a);
        for (int b = 0; b + a <= k; ++b) acc += weighted_l2_sq(fd_dv(dxa, b), r);
    }
    return std::sqrt(acc);
}

double winf_norm(const PhaseField& f, int k, double r) {
    check_budget(f.grid, k);
    double acc = 0.0;
    for (int a = 0; a <= k; ++a) {
        const PhaseField dxa = spectral_dx(f, a);
        for (int b = 0; b + a <= k; ++b) acc += weighted_max(fd_dv(dxa, b), r);
    }
    return acc;
}

double aniso_norm(const PhaseField& f, double m, double n) {
    if (n < -8.0) throw config_error("aniso_norm: v-order below the supported floor (-8)");
    if (decay_certificate(f) > kDecayTolerance)
        throw domain_error("aniso_norm: boundary-decay invariant violated (windowing invalid)");
    const int nx = f.grid.nx, nv = f.grid.nv;
    // 2-D DFT: x rows first, then v columns.
    std::vector<std::complex<double>> hat(static_cast<size_t>(nx) * nv);
    std::vector<std::complex<double>> buf(nx);
    for (int j = 0; j < nv; ++j) {
        const double* row = f.row(j);
        for (int i = 0; i < nx; ++i) buf[i] = row[i];
        fft_forward(buf);
        for (int i = 0; i < nx; ++i) hat[static_cast<size_t>(j) * nx + i] = buf[i];
    }
    std::vector<std::complex<double>> col(nv);
    double acc = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nv; ++j) col[j] = hat[static_cast<size_t>(j) * nx + i];
        fft_forward(col);
        const double kx = 2.0 * pi * signed_freq(i, nx);
        const double wx = std::pow(1.0 + kx * kx, m);
        for (int l = 0; l < nv; ++l) {
            const double eta = pi * signed_freq(l, nv) / f.grid.v_cut;
            const double w = wx * std::pow(1.0 + eta * eta, n);
            acc += w * std::norm(col[l]);
        }
    }
    acc *= f.grid.dx * f.grid.dv / (static_cast<double>(nx) * nv);
    return std::sqrt(acc);
}

SpatialField moment(const PhaseField& f, const MomentSpec& spec) {
    const int nx = f.grid.nx, nv = f.grid.nv;
    SpatialField out(nx, f.time);
    std::vector<double> psi(nv);
    for (int j = 0; j < nv; ++j) {
        psi[j] = spec.psi(f.grid.v(j)) * ((j == 0 || j == nv - 1) ? 0.5 : 1.0);
    }
    for (int j = 0; j < nv; ++j) {
        const double* row = f.row(j);
        const double w = psi[j] * f.grid.dv;
        for (int i = 0; i < nx; ++i) out.values[i] += w * row[i];
    }
    return out;
}

std::pair<double, double> compute_thresholds(int d, double lambda, double r0) {
    if (d < 1) throw config_error("thresholds: dimension must be >= 1");
    if (lambda < 0.0) throw config_error("thresholds: lambda must be >= 0");
    if (r0 < 0.0) throw config_error("thresholds: r0 must be >= 0");
    const double N = 1.5 * d + 4.0;
    const double R = 0.5 * d + 2.0 * (1.0 + lambda) * (1.0 + d) + r0;
    return {N, R};
}

} // namespace vlab
