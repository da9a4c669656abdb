#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "vlab/characteristics.hpp"
#include "vlab/grid.hpp"
#include "vlab/models.hpp"

namespace vlab {

/// Coefficients (phi, psi) of the second-order operator
///   L = dxx + phi(t,x,v) dx dv + psi(t,x,v) dvv,
/// stored at increasing times. Both vanish identically at t = 0, so L
/// degenerates to the plain second x derivative there.
struct CoeffPair {
    Grid grid;
    std::vector<double> times;
    std::vector<PhaseField> phi;
    std::vector<PhaseField> psi;

    /// Linear interpolation between stored times.
    std::pair<PhaseField, PhaseField> at(double t) const;
};

/// Solves the coefficient transport system (see docs/coefficient_system.md
/// for the derivation of the d=1 form)
///   T phi = 2 a' psi - a' phi^2 + 2 Fx + phi Fv
///   T psi = - a' phi psi + phi Fx + 2 psi Fv
/// with zero initial data, where T = dt + a(v) dx + F dv is the transport
/// operator and a' = da/dv. Integration is RK4 on the augmented state
/// (X, V, phi, psi) along forward characteristics from every grid node,
/// re-gridded onto the uniform grid at each stored time (two monotone
/// cubic passes, x then v). Re-gridding failure raises horizon_error.
CoeffPair solve_coeff_system(const ForceField& force, const AdvectionField& a, const Grid& grid,
                             double T, double dt, int store_every = 10);

/// L g at time t: spectral dxx, mixed spectral/FD cross term, FD dvv, with
/// the coefficient slices interpolated to t.
PhaseField apply_L(const CoeffPair& coeffs, const PhaseField& g, double t);

/// Closed-form test trajectory g(t,x,v) with analytic time derivative, so
/// that T g carries no time-stepping error.
struct ManufacturedField {
    std::function<double(double, double, double)> value;
    std::function<double(double, double, double)> ddt;

    PhaseField sample(const Grid& g, double t) const;
    PhaseField sample_ddt(const Grid& g, double t) const;
};

/// Grid L2 norm of
///   L T(g) - T L(g) - (L F) dv g - (L a) dx g - a' phi L g,
/// the defect of the commutation identity satisfied by construction of the
/// coefficient system. The time derivative inside T L(g) is a centered
/// difference over +-dt with coefficients at matching times; all space
/// derivatives use the library calculus. Decays at second order under
/// simultaneous (dx, dv, dt) refinement for smooth data.
double commutation_residual(const CoeffPair& coeffs, const ForceField& force,
                            const AdvectionField& a, const ManufacturedField& g, double t,
                            double dt);

} // namespace vlab
