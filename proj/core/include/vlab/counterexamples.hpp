#pragma once

#include <optional>

#include "vlab/scenario.hpp"
#include "vlab/solver.hpp"

namespace vlab {

/// phi = d/dv exp(-1/(1-(2v)^2)) extended by zero: smooth, compactly
/// supported in [-1/2,1/2], mean zero by the derivative structure.
/// deriv in {0,1,2} returns phi, phi', phi''.
double bump_phi(double v, int deriv);

/// L2 norm of phi^(k) on [-1/2,1/2] by high-resolution quadrature.
double bump_phi_l2(int deriv, double amplitude = 1.0);

/// Free-streaming moment blow-up check: the density derivative of the
/// square-profile / bump-velocity initial state obeys
///   || dx^k rho(t) ||_{L2}^2 = (2 / t^(2(k-1)-1)) ||phi^(k-1)||_{L2}^2
/// while the two translates stay apart. `exact` evaluates the right side
/// (with the phi norm from 1-D quadrature); `quadrature` evaluates the left
/// side directly from the translate formula on a fine x grid.
struct Ce1Result {
    double exact = 0.0;
    double quadrature = 0.0;
};

/// Requires k in {1,2,3} and 0 < t < 4 (validity window of the translate
/// geometry); t >= 4 raises domain_error.
Ce1Result counterexample1(int k, double t, double amplitude = 1.0);

/// ||rho||_{L2(eps,T;H^k)} with the time integral discretized by the
/// trapezoid rule on time_nodes points over [T/time_nodes, T]. Under
/// refinement (doubling time_nodes) the quantity diverges for k >= 2: the
/// rough-moment contrast to the smooth-scenario boundedness probe.
double ce1_time_l2_hk(int k, double T, int time_nodes, double amplitude = 1.0);

enum class SuperpositionWhich { example2, example3 };

/// Construction data for the two decoupling runs. Defaults reproduce the
/// published geometry: example2 separates supports in v (psi and the
/// passive bump live in [-1/2,1/2] and [1,2]), example3 in x (bumps on
/// [0,1/8] and [1/4,3/8], force shifted by 1/4).
struct SuperpositionSpec {
    SuperpositionWhich which = SuperpositionWhich::example2;
    int nx = 128, nv = 128;
    double v_cut = 4.0;
    double T = 0.2;
    double dt = 1e-3;
    int cadence = 10;
    double window_T = 0.25; ///< fixed-horizon window for the chained coupled run
    double amp1 = 1.0;      ///< driver bump amplitude
    double amp2 = 1.0;      ///< passive bump amplitude
    double psi_amp = 1.0;

    // example2 geometry
    double ex2_f2_vlo = 1.0, ex2_f2_vhi = 2.0;
    // example3 geometry
    double ex3_f1_xlo = 0.0, ex3_f1_xhi = 0.125;
    double ex3_f2_xlo = 0.25, ex3_f2_xhi = 0.375;
    double ex3_vhalf = 0.25;
    double shift = 0.25;

    static SuperpositionSpec example2();
    static SuperpositionSpec example3();
};

struct SuperpositionResult {
    std::vector<double> times;      ///< snapshot times
    std::vector<double> residuals;  ///< ||f - (f1 + f2)||_{H^0_0} per snapshot
    std::optional<double> first_contact; ///< first support-contact time, if any
    double max_residual_disjoint = 0.0;  ///< sup of residuals while disjoint
    double max_residual_total = 0.0;
};

/// Fragment initial states (1 = driver, 2 = passive, 0 = their sum).
PhaseField superposition_initial(const SuperpositionSpec& spec, int fragment);

/// The coupled run alone (chained fixed-horizon windows), full time mesh;
/// used to measure the solver's step-error scale on this data class.
Trajectory superposition_coupled_trajectory(const SuperpositionSpec& spec);

/// Runs the coupled simulation from the summed state and the two decoupled
/// runs (nonlinear driver, then the passive fragment transported linearly
/// through the driver's force history), and measures the decoupling
/// residual over time. Throws config_error when the fragment supports
/// violate the separation the construction requires.
SuperpositionResult counterexample_superposition(const SuperpositionSpec& spec);

} // namespace vlab
