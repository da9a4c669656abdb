#pragma once

#include <optional>
#include <string>

#include "vlab/solver.hpp"

namespace vlab {

/// Declarative mirror of a scenario file: sections [grid], [advection],
/// [model], [initial], [run], [norms]. parse keeps this form so that the
/// canonical emission round-trips bit-exactly; build() materializes the
/// runnable Scenario.
struct ScenarioSpec {
    // [grid]
    int nx = 0, nv = 0;
    double v_cut = 0.0;
    // [advection]
    std::string advection_kind; // classical | relativistic
    std::optional<double> c;    // required iff relativistic
    // [model]
    std::string model_kind;     // zero | poisson | moment_force
    std::string sign = "repulsive"; // poisson only
    double shift = 0.0;             // moment_force only
    double psi_amp = 1.0;           // moment_force only
    // [initial]
    std::string initial_kind;   // gaussian_perturbed | file | product
    double amplitude = 0.1;     // gaussian_perturbed, product
    int mode = 1;               // gaussian_perturbed
    std::string path;           // file
    double x_center = 0.5, x_width = 0.25;  // product
    double v_center = 0.0, v_width = 1.0;   // product
    // [run]
    double T = 0.0;
    double dt = 1e-3;
    double picard_tol = 1e-8;
    int picard_max = 25;
    int cadence = 10;
    double contraction_r = 2.0;
    // [norms]
    std::vector<NormRequest> norms;

    Scenario build() const;
};

/// Parses and validates a scenario file. Error messages name the offending
/// key and the violated constraint; unknown keys are rejected.
ScenarioSpec parse_scenario_text(const std::string& text);
ScenarioSpec parse_scenario(const std::string& path);

/// Canonical emission: fixed section and key order, shortest round-trip
/// number formatting. parse(emit(s)) reproduces s and emit is idempotent
/// byte for byte.
std::string canonical_scenario_text(const ScenarioSpec& spec);

/// Compactly supported smooth bump: exp(1 - 1/(1-u^2)) on (-1,1), zero
/// outside, maximum 1 at u = 0.
double smooth_bump(double u);

/// Test function amp * smooth_bump(2v): compact support in [-1/2, 1/2].
MomentSpec bump_psi(double amp);

} // namespace vlab
