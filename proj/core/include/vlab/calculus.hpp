#pragma once

#include <utility>
#include <vector>

#include "vlab/grid.hpp"

namespace vlab {

/// k-th x-derivative, row-wise Fourier multiplier (i 2 pi m)^k.
/// Exact (to rounding) for fields band-limited below nx/2. k = 0 is the
/// identity. For odd k the Nyquist mode is zeroed to keep the result real.
PhaseField spectral_dx(const PhaseField& f, int k);

/// k-th v-derivative by finite differences of order 4: centered stencils in
/// the interior, one-sided near the window edges. If the field violates the
/// boundary-decay invariant a diagnostic note is attached to the result.
PhaseField fd_dv(const PhaseField& f, int k);

/// Finite-difference weights for the m-th derivative at point z given
/// stencil nodes xs (Fornberg recurrence).
std::vector<double> fd_weights(double z, const std::vector<double>& xs, int m);

/// Trapezoid quadrature over the full phase grid (periodic in x, trapezoid
/// over the sampled v window).
double integrate_phase(const PhaseField& f);

/// Trapezoid quadrature over x only.
double integrate_spatial(const SpatialField& f);

/// Weighted Sobolev norm: all mixed derivatives up to total order k with
/// velocity weight (1+v^2)^r,
///   norm^2 = sum_{a+b<=k} integral (1+v^2)^r |dx^a dv^b f|^2.
/// Refuses k beyond the derivative budget of the grid (k > min(nx,nv)/8):
/// high-order differences on coarse grids report noise, not norms.
double weighted_sobolev_norm(const PhaseField& f, int k, double r);

/// Grid-max counterpart: sum_{a+b<=k} max |(1+v^2)^(r/2) dx^a dv^b f|.
double winf_norm(const PhaseField& f, int k, double r);

/// Anisotropic norm via the 2-D discrete Fourier transform, multiplier
/// (1+|k|^2)^(m/2) (1+|eta|^2)^(n/2) with k = 2 pi (x mode) and eta the
/// window frequency in v. n may be negative (supported down to -8).
/// The v transform treats the field as compactly supported in the window,
/// so the boundary-decay invariant is required; violation is an error.
double aniso_norm(const PhaseField& f, double m, double n);

/// Velocity moment: per x column, trapezoid quadrature of f(x,v) psi(v).
SpatialField moment(const PhaseField& f, const MomentSpec& spec);

/// Regularity/integrability thresholds of the abstract framework:
/// N = 3d/2 + 4,  R = d/2 + 2(1+lambda)(1+d) + r0.
std::pair<double, double> compute_thresholds(int d, double lambda, double r0);

} // namespace vlab
