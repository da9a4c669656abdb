#pragma once

#include <memory>
#include <vector>

#include "vlab/fft.hpp"
#include "vlab/grid.hpp"
#include "vlab/interp.hpp"
#include "vlab/models.hpp"

namespace vlab {

/// Fraction of v_cut beyond which a traced interior state counts as having
/// escaped the certified velocity window.
inline constexpr double kEscapeFence = 0.95;

/// Sampled characteristic maps (X,V)(s,t,x,v): position/velocity at time s
/// of the trajectory that passes through the grid node (x,v) at time t.
/// X is reduced mod 1; X_unwrapped keeps the accumulated position so that
/// interpolation and differentiation never straddle the torus seam.
struct FlowMap {
    double s = 0.0;
    double t = 0.0;
    Grid grid;
    std::vector<double> X;           ///< arrival positions mod 1, layout [j*nx+i]
    std::vector<double> X_unwrapped; ///< same without the mod-1 reduction
    std::vector<double> V;           ///< arrival velocities

    double x_at(int i, int j) const { return X[static_cast<size_t>(j) * grid.nx + i]; }
    double v_at(int i, int j) const { return V[static_cast<size_t>(j) * grid.nx + i]; }
};

/// Classical RK4 integration of the characteristic system
///   dX/ds = a(V), dV/ds = F(s,X,V)
/// from every grid node at time from_t to time to_s (forward or backward).
/// Nodes starting inside the escape fence must stay inside it; a crossing
/// raises escape_error.
FlowMap trace_flow(const ForceField& force, const AdvectionField& a, double from_t, double to_s,
                   const Grid& grid, double dt);

/// Continues an existing flow map from its evaluation time to a new one
/// (used e.g. to verify the group property without 2-D interpolation).
FlowMap extend_flow(const FlowMap& flow, const ForceField& force, const AdvectionField& a,
                    double to_s, double dt);

/// Monotone cubic interpolant of the inverse of v -> V(s,t,x,v) on one x
/// column. Throws diffeo_error when the sampled column is not strictly
/// monotone (t too large).
MonotoneCubic invert_velocity_map(const FlowMap& flow, int x_index);

/// Jacobian determinant of (x,v) -> (X,V), centered finite differences
/// (order 4, one-sided at the v edges). Volume preservation makes this
/// identically 1 for divergence-free (a,F).
PhaseField liouville_det(const FlowMap& flow);

/// Solution stack of the velocity-straightening transport equation
///   d Phi/dt + a(Phi) dPhi/dx = F(t,x,Phi),  Phi(0,x,v) = v,
/// stored at increasing times. Phi(0) is the exact identity in v.
struct BurgersField {
    Grid grid;
    std::vector<double> times;
    std::vector<PhaseField> phi;
};

/// Method-of-characteristics solve of the straightening equation: forward
/// tracing (y' = a(phi), phi' = F(t,y,phi)) from every node of the x grid
/// per v label, re-gridded onto the uniform x grid by periodic monotone
/// cubic interpolation at each stored time.
///
/// Throws shock_error at the first stored time where the traced positions
/// stop being strictly increasing in the starting position (characteristic
/// crossing); the error carries that time, which doubles as the empirical
/// straightening horizon. step_bound caps the sup-norm growth of Phi - v
/// between consecutive stored times.
BurgersField solve_burgers(const ForceField& force, const AdvectionField& a, const Grid& grid,
                           double T, double dt, int store_every = 1, double step_bound = 0.25);

/// Evaluator for a stored Burgers stack: linear in time between stored
/// slices, trigonometric in x, local monotone cubic across v labels.
class BurgersEvaluator {
  public:
    explicit BurgersEvaluator(const BurgersField& field);

    /// Phi at stored label row j.
    double at_label(double time, double x, int j) const;
    /// Phi at an arbitrary label v (cubic across rows).
    double at(double time, double x, double v) const;

    const BurgersField& field() const { return *field_; }

  private:
    const BurgersField* field_;
    std::vector<PhaseFieldInterpolant> interp_;

    std::pair<int, double> bracket(double time) const;
};

/// Characteristics of the straightened operator for one (t,s) pair:
///   d/dtau Xs(tau) = a(Phi)(tau, Xs, v),  Xs(s) = x,
/// together with the deviation map xtilde defined by
///   Xs = x + (t-s)(a(v) + xtilde)
/// and the label change psi solving Xs(t,s,x,psi(x,v)) = x + (t-s) a(v).
struct StraightenedFlow {
    double t = 0.0;
    double s = 0.0;
    Grid grid;
    std::vector<double> X;           ///< arrival positions mod 1
    std::vector<double> X_unwrapped;
    std::vector<double> xtilde;
    std::vector<double> psi;
};

StraightenedFlow straightened_flow(const BurgersEvaluator& burgers, const AdvectionField& a,
                                   double t, double s, double dt);

/// Independent single-trajectory integration of the straightened
/// characteristic ODE, usable at off-grid labels (verification path for the
/// defining identity of psi). Returns the unwrapped arrival position.
double straightened_position(const BurgersEvaluator& burgers, const AdvectionField& a, double t,
                             double s, double x0, double vlabel, double dt);

} // namespace vlab
