#pragma once

#include <complex>
#include <vector>

#include "vlab/grid.hpp"

namespace vlab {

/// Unnormalized complex DFT, FFTW sign convention:
/// forward:  c[m] = sum_i f[i] exp(-2*pi*i*m*i/n)
/// backward: f[i] = sum_m c[m] exp(+2*pi*i*m*i/n)   (caller divides by n)
/// n must be a power of two (grid invariant). Thread safe.
void fft_forward(std::vector<std::complex<double>>& data);
void fft_backward(std::vector<std::complex<double>>& data);

/// Signed integer frequency of DFT bin m for transform size n
/// (m in [0,n) -> frequency in [-n/2, n/2)).
inline int signed_freq(int m, int n) { return m < n / 2 ? m : m - n; }

/// Forward DFT of a real sequence.
std::vector<std::complex<double>> fft_of_real(const double* f, int n);

/// Trigonometric interpolant of real periodic samples on [0,1).
///
/// Modes whose coefficient magnitude falls below `threshold` times the
/// largest magnitude are dropped; evaluation is otherwise the exact
/// trigonometric interpolant (Nyquist mode taken as a cosine).
class FourierInterpolant {
  public:
    FourierInterpolant() = default;
    FourierInterpolant(const double* samples, int n, double threshold = 1e-15);
    explicit FourierInterpolant(const SpatialField& f, double threshold = 1e-15);

    double operator()(double x) const;
    /// k-th derivative evaluated at x.
    double derivative(double x, int k) const;
    int mode_count() const { return mmax_; }

  private:
    int n_ = 0;
    int mmax_ = 0; ///< largest retained |frequency|
    std::vector<std::complex<double>> coeff_; ///< c[m]/n for m = 0..n/2
};

/// Spectral H^n norm of a periodic function on [0,1):
/// norm^2 = sum_m (1 + (2 pi m)^2)^n |chat(m)|^2 with chat the Fourier
/// coefficients. n may be negative or fractional.
double spectral_hn_norm(const SpatialField& f, double n);

/// Same norm with the mean removed first.
double spectral_hn_norm_meanfree(const SpatialField& f, double n);

/// f(x + shift) for periodic f, by exact Fourier phase multiplication.
SpatialField fourier_shift(const SpatialField& f, double shift);

/// Per-row (fixed v) trigonometric interpolants of a phase field; the
/// workhorse behind off-grid evaluation in x.
class PhaseFieldInterpolant {
  public:
    explicit PhaseFieldInterpolant(const PhaseField& f, double threshold = 1e-15);

    /// Value of row j at arbitrary x.
    double row_at(int j, double x) const;

    /// Evaluates rows [j0, j0+count) at a common x. `out` receives count
    /// values. Shares the phase table across rows, which is what makes the
    /// semi-Lagrangian inner loop affordable.
    void rows_at(int j0, int count, double x, double* out) const;

    const Grid& grid() const { return grid_; }

  private:
    Grid grid_;
    int half_ = 0;       ///< nx/2
    int mmax_ = 0;       ///< global retained mode cap
    std::vector<std::complex<double>> coeff_; ///< [j*(nx/2+1) + m], scaled by 1/nx
};

} // namespace vlab
