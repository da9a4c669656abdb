#include "vlab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace vlab {

namespace {

// FFTW plan creation is not thread safe; execution via fftw_execute_dft is.
// Plans are created once per (size, sign) with FFTW_ESTIMATE|FFTW_UNALIGNED
// so they can run on any caller buffer.
class PlanCache {
  public:
    fftw_plan get(int n, int sign) {
        std::scoped_lock lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch(n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan p = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_[key] = p;
        return p;
    }

  private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(std::vector<std::complex<double>>& data, int sign) {
    const int n = static_cast<int>(data.size());
    fftw_plan p = cache().get(n, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
}

} // namespace

void fft_forward(std::vector<std::complex<double>>& data) { execute(data, FFTW_FORWARD); }
void fft_backward(std::vector<std::complex<double>>& data) { execute(data, FFTW_BACKWARD); }

std::vector<std::complex<double>> fft_of_real(const double* f, int n) {
    std::vector<std::complex<double>> data(n);
    for (int i = 0; i < n; ++i) data[i] = f[i];
    fft_forward(data);
    return data;
}

FourierInterpolant::FourierInterpolant(const double* samples, int n, double threshold) : n_(n) {
    auto c = fft_of_real(samples, n);
    coeff_.resize(n / 2 + 1);
    double peak = 0.0;
    for (int m = 0; m <= n / 2; ++m) {
        coeff_[m] = c[m] / static_cast<double>(n);
        peak = std::max(peak, std::abs(coeff_[m]));
    }
    mmax_ = 0;
    for (int m = 1; m <= n / 2; ++m)
        if (std::abs(coeff_[m]) > threshold * peak) mmax_ = m;
}

FourierInterpolant::FourierInterpolant(const SpatialField& f, double threshold)
    : FourierInterpolant(f.values.data(), f.nx, threshold) {}

double FourierInterpolant::operator()(double x) const { return derivative(x, 0); }

double FourierInterpolant::derivative(double x, int k) const {
    using std::numbers::pi;
    const std::complex<double> rot = std::polar(1.0, 2.0 * pi * x);
    std::complex<double> phase = rot;
    double acc = (k == 0) ? coeff_[0].real() : 0.0;
    for (int m = 1; m <= mmax_; ++m) {
        std::complex<double> term = coeff_[m] * phase;
        if (k > 0) {
            const std::complex<double> iw(0.0, 2.0 * pi * m);
            std::complex<double> mult = 1.0;
            for (int q = 0; q < k; ++q) mult *= iw;
            term *= mult;
        }
        // Nyquist mode of a real signal contributes as a cosine; the factor
        // 2 Re(...) below would double it, so halve there.
        acc += (m == n_ / 2 ? 1.0 : 2.0) * term.real();
        phase *= rot;
    }
    return acc;
}

double spectral_hn_norm(const SpatialField& f, double n) {
    auto c = fft_of_real(f.values.data(), f.nx);
    using std::numbers::pi;
    double acc = 0.0;
    for (int m = 0; m < f.nx; ++m) {
        const double k = 2.0 * pi * signed_freq(m, f.nx);
        const double w = std::pow(1.0 + k * k, n);
        const double mag = std::abs(c[m]) / f.nx;
        acc += w * mag * mag;
    }
    return std::sqrt(acc);
}

double spectral_hn_norm_meanfree(const SpatialField& f, double n) {
    SpatialField g = f;
    double mean = 0.0;
    for (double x : g.values) mean += x;
    mean /= g.nx;
    for (double& x : g.values) x -= mean;
    return spectral_hn_norm(g, n);
}

SpatialField fourier_shift(const SpatialField& f, double shift) {
    auto c = fft_of_real(f.values.data(), f.nx);
    using std::numbers::pi;
    const int n = f.nx;
    for (int m = 0; m < n; ++m) {
        const int k = signed_freq(m, n);
        c[m] *= std::polar(1.0, 2.0 * pi * k * shift);
    }
    // Nyquist phase is ambiguous under the signed-frequency choice; zero it
    // unless the shift is a whole grid step (then it is exact anyway).
    if (n % 2 == 0) {
        const double steps = shift * n;
        if (std::abs(steps - std::round(steps)) > 1e-12) c[n / 2] = 0.0;
    }
    fft_backward(c);
    SpatialField out(n, f.time);
    for (int i = 0; i < n; ++i) out.values[i] = c[i].real() / n;
    return out;
}

PhaseFieldInterpolant::PhaseFieldInterpolant(const PhaseField& f, double threshold)
    : grid_(f.grid), half_(f.grid.nx / 2) {
    const int nx = grid_.nx, nv = grid_.nv;
    coeff_.resize(static_cast<size_t>(nv) * (half_ + 1));
    double peak = 0.0;
    for (int j = 0; j < nv; ++j) {
        auto c = fft_of_real(f.row(j), nx);
        for (int m = 0; m <= half_; ++m) {
            const auto val = c[m] / static_cast<double>(nx);
            coeff_[static_cast<size_t>(j) * (half_ + 1) + m] = val;
            peak = std::max(peak, std::abs(val));
        }
    }
    mmax_ = 0;
    for (int j = 0; j < nv && mmax_ < half_; ++j) {
        const auto* row = coeff_.data() + static_cast<size_t>(j) * (half_ + 1);
        for (int m = half_; m > mmax_; --m)
            if (std::abs(row[m]) > threshold * peak) {
                mmax_ = m;
                break;
            }
    }
}

double PhaseFieldInterpolant::row_at(int j, double x) const {
    double out;
    rows_at(j, 1, x, &out);
    return out;
}

void PhaseFieldInterpolant::rows_at(int j0, int count, double x, double* out) const {
    using std::numbers::pi;
    const std::complex<double> rot = std::polar(1.0, 2.0 * pi * x);
    for (int r = 0; r < count; ++r) out[r] = coeff_[static_cast<size_t>(j0 + r) * (half_ + 1)].real();
    std::complex<double> phase = rot;
    for (int m = 1; m <= mmax_; ++m) {
        const double scale = (m == half_) ? 1.0 : 2.0;
        const double pre = phase.real() * scale, pim = phase.imag() * scale;
        for (int r = 0; r < count; ++r) {
            const auto& c = coeff_[static_cast<size_t>(j0 + r) * (half_ + 1) + m];
            out[r] += c.real() * pre - c.imag() * pim;
        }
        phase *= rot;
    }
}

} // namespace vlab
