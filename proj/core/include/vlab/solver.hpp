#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vlab/calculus.hpp"
#include "vlab/grid.hpp"
#include "vlab/models.hpp"

namespace vlab {

/// One requested diagnostic norm: kind in {"sobolev", "winf", "aniso"} with
/// its two parameters (order k / weight r, or x-order / v-order for aniso).
struct NormRequest {
    std::string kind;
    double k = 0.0;
    double r = 0.0;
};

/// Everything a run needs. Packages the grid, the model pair (a, F), the
/// initial state and the run controls.
struct Scenario {
    Grid grid;
    AdvectionField advection;
    ForceModel model;
    PhaseField f0;
    double T = 0.0;
    double dt = 1e-3;
    double picard_tol = 1e-8;
    int picard_max = 25;
    double contraction_r = 2.0; ///< weight of the sweep-distance norm
    std::vector<NormRequest> norm_requests;
    int output_cadence = 10;
    bool keep_trajectory = false;

    void validate() const; ///< throws config_error on invariant violations
};

/// States on the shared time mesh t_i = i dt.
struct Trajectory {
    double dt = 0.0;
    std::vector<PhaseField> states;
};

struct SimOutput {
    std::vector<PhaseField> snapshots;
    std::vector<std::vector<SpatialField>> force_history; ///< F^j per snapshot
    NormReport norm_history;
    std::vector<double> contraction_ratios; ///< per accepted sweep (from the 2nd)
    std::vector<double> sweep_distances;    ///< sup_t distance per sweep
    int sweeps = 0;
    bool converged = false;
    std::vector<PhaseField> trajectory; ///< full mesh, only if keep_trajectory
};

/// One backward semi-Lagrangian step: every grid node is traced back by dt
/// through (a, F) with a single RK4 step (force frozen at the step start),
/// and f is evaluated at the foot by Fourier interpolation in x composed
/// with local monotone cubic interpolation in v. Feet outside the velocity
/// window read zero. Raises escape_error when the stepped field violates
/// the boundary-decay certificate (state reaching the window edge).
PhaseField transport_step(const PhaseField& f, const ForceField& force, const AdvectionField& a,
                          double dt, double decay_guard = 1e-8);

/// One Picard sweep over [0,T]: assembles the force history from the
/// previous trajectory's states and transports scenario.f0 through it step
/// by step. prev must live on the scenario's time mesh.
Trajectory picard_iterate(const Trajectory& prev, const Scenario& scenario);

/// Frozen initial guess f(t) == f0 on the scenario mesh.
Trajectory frozen_trajectory(const Scenario& scenario);

/// Picard iteration to the fixed point: sweeps until the successive
/// trajectory distance sup_t ||f_(k+1) - f_k||_{H^0_r} drops below
/// picard_tol, recording the contraction ratio of every accepted sweep.
/// Throws convergence_error (with the ratio history) when picard_max sweeps
/// do not reach the tolerance -- the signature of a horizon that is too
/// long for the contraction argument.
SimOutput run_simulation(const Scenario& scenario);

/// Halves scenario.T until run_simulation converges with every ratio below
/// gate; returns the accepted horizon and its output.
std::pair<double, SimOutput> bisect_horizon(Scenario scenario, double gate = 0.5 + 1e-3,
                                            double min_T = 1e-2);

double total_mass(const PhaseField& f);
double kinetic_energy(const PhaseField& f);
double field_energy(const SpatialField& e);

} // namespace vlab
