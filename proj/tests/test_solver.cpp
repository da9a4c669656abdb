#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_utils.hpp"
#include "vlab/calculus.hpp"
#include "vlab/characteristics.hpp"
#include "vlab/solver.hpp"

using namespace vlab;
using namespace vlab::test;

namespace {

PhaseField perturbed_gaussian(const Grid& g, double eps) {
    return sample_phase(g, [eps](double x, double v) {
        return (1.0 + eps * std::cos(2.0 * kPi * x)) * std::exp(-0.5 * v * v) /
               std::sqrt(2.0 * kPi);
    });
}

Scenario poisson_scenario(int n, double T, double eps = 0.1) {
    Scenario sc;
    sc.grid = build_grid(n, n, 8.0);
    sc.advection = AdvectionField::classical();
    sc.model = ForceModel::poisson(PoissonSign::repulsive);
    sc.f0 = perturbed_gaussian(sc.grid, eps);
    sc.T = T;
    sc.dt = 1e-3;
    sc.keep_trajectory = true;
    return sc;
}

} // namespace

TEST_CASE("transport_step basics: dt=0 identity, constants preserved") {
    Grid g = build_grid(32, 64, 8.0);
    PhaseField f = random_smooth_field(g, 2);
    ZeroForce none;
    AdvectionField a = AdvectionField::classical();

    PhaseField same = transport_step(f, none, a, 0.0);
    CHECK(max_abs_diff(same, f) == 0.0);

    PhaseField cst = sample_phase(g, [](double, double) { return 0.8; });
    PhaseField moved = transport_step(cst, none, a, 1e-3);
    CHECK(max_abs_diff(moved, cst) < 1e-13);
    CHECK(moved.time == doctest::Approx(1e-3));
}

TEST_CASE("transport_step free transport: band-limited exactness") {
    Grid g = build_grid(32, 64, 8.0);
    ZeroForce none;
    AdvectionField a = AdvectionField::classical();
    PhaseField f = sample_phase(g, [](double x, double v) {
        return std::sin(2.0 * kPi * x) * std::exp(-0.5 * v * v);
    });
    const double T = 0.5, dt = 1e-3;
    PhaseField cur = f;
    const int n = static_cast<int>(std::lround(T / dt));
    for (int i = 0; i < n; ++i) cur = transport_step(cur, none, a, dt);
    PhaseField exact = sample_phase(g, [T](double x, double v) {
        return std::sin(2.0 * kPi * (x - v * T)) * std::exp(-0.5 * v * v);
    });
    CHECK(weighted_sobolev_norm(cur - exact, 0, 0.0) < 1e-12);
}

TEST_CASE("transport_step free transport: convergence on non-band-limited data") {
    ZeroForce none;
    AdvectionField a = AdvectionField::classical();
    auto run = [&](int nx) {
        Grid g = build_grid(nx, 64, 8.0);
        auto f0 = [](double x, double v) {
            const double ux = (x - 0.5) - std::round(x - 0.5);
            return std::exp(-ux * ux / (2.0 * 0.04 * 0.04)) * std::exp(-0.5 * v * v);
        };
        PhaseField cur = sample_phase(g, f0);
        const double T = 0.1, dt = 2e-3;
        const int n = static_cast<int>(std::lround(T / dt));
        for (int i = 0; i < n; ++i) cur = transport_step(cur, none, a, dt);
        PhaseField exact = sample_phase(g, [&](double x, double v) { return f0(x - v * T, v); });
        return weighted_sobolev_norm(cur - exact, 0, 0.0);
    };
    const double e32 = run(32), e64 = run(64);
    CHECK(std::log2(e32 / e64) >= 3.0);
}

TEST_CASE("transport_step escape guard trips when mass reaches the edge") {
    Grid g = build_grid(16, 32, 2.0);
    AnalyticForce down([](double, double, double) { return -3.0; },
                       [](double, double, double) { return 0.0; },
                       [](double, double, double) { return 0.0; });
    AdvectionField a = AdvectionField::classical();
    PhaseField f = sample_phase(g, [](double, double v) { return std::exp(-8.0 * v * v); });
    bool threw = false;
    try {
        PhaseField cur = f;
        for (int i = 0; i < 600; ++i) cur = transport_step(cur, down, a, 1e-3);
    } catch (const escape_error&) {
        threw = true;
    }
    CHECK(threw);
}

TEST_CASE("picard_iterate: zero-force sweep ignores the previous trajectory") {
    Scenario sc;
    sc.grid = build_grid(32, 64, 8.0);
    sc.advection = AdvectionField::classical();
    sc.model = ForceModel::zero();
    sc.f0 = perturbed_gaussian(sc.grid, 0.1);
    sc.T = 0.05;
    sc.dt = 1e-3;

    Trajectory frozen = frozen_trajectory(sc);
    Trajectory other = frozen;
    for (auto& st : other.states) st = random_smooth_field(sc.grid, 9);
    Trajectory a = picard_iterate(frozen, sc);
    Trajectory b = picard_iterate(other, sc);
    REQUIRE(a.states.size() == b.states.size());
    for (size_t i = 0; i < a.states.size(); ++i)
        CHECK(max_abs_diff(a.states[i], b.states[i]) == 0.0);
}

TEST_CASE("picard_iterate reproduces a frozen-force linear solution") {
    Scenario sc;
    sc.grid = build_grid(64, 128, 8.0);
    sc.advection = AdvectionField::classical();
    const double eps = 0.05;
    auto force = std::make_shared<AnalyticForce>(
        [eps](double, double x, double) { return eps * std::sin(2.0 * kPi * x); },
        [eps](double, double x, double) { return eps * 2.0 * kPi * std::cos(2.0 * kPi * x); },
        [](double, double, double) { return 0.0; });
    sc.model = ForceModel::external_force(force);
    sc.f0 = perturbed_gaussian(sc.grid, 0.1);
    sc.T = 0.25;
    sc.dt = 1e-3;

    Trajectory traj = picard_iterate(frozen_trajectory(sc), sc);

    // reference: exact characteristics (fine RK4) composed with f0
    FlowMap feet = trace_flow(*force, sc.advection, sc.T, 0.0, sc.grid, 1e-5);
    PhaseField ref(sc.grid, sc.T);
    for (int j = 0; j < sc.grid.nv; ++j)
        for (int i = 0; i < sc.grid.nx; ++i) {
            const size_t q = static_cast<size_t>(j) * sc.grid.nx + i;
            const double x = feet.X[q], v = feet.V[q];
            ref.at(i, j) = (1.0 + 0.1 * std::cos(2.0 * kPi * x)) * std::exp(-0.5 * v * v) /
                           std::sqrt(2.0 * kPi);
        }
    // interpolation-limited plateau: measured ~5e-5 at this resolution
    CHECK(max_abs_diff(traj.states.back(), ref) < 2e-4);
}

TEST_CASE("run_simulation: zero-force scenario converges with trivial ratios") {
    Scenario sc;
    sc.grid = build_grid(32, 64, 8.0);
    sc.advection = AdvectionField::classical();
    sc.model = ForceModel::zero();
    sc.f0 = perturbed_gaussian(sc.grid, 0.1);
    sc.T = 0.05;
    sc.dt = 1e-3;
    SimOutput out = run_simulation(sc);
    CHECK(out.converged);
    CHECK(out.sweeps <= 2);
    for (double r : out.contraction_ratios) CHECK(r == 0.0);
}

TEST_CASE("run_simulation: uniform Poisson state stays free-streaming") {
    Scenario sc;
    sc.grid = build_grid(32, 64, 8.0);
    sc.advection = AdvectionField::classical();
    sc.model = ForceModel::poisson(PoissonSign::repulsive);
    sc.f0 = sample_phase(sc.grid, [](double, double v) {
        return std::exp(-0.5 * v * v) / std::sqrt(2.0 * kPi);
    });
    sc.T = 0.05;
    sc.dt = 1e-3;
    SimOutput out = run_simulation(sc);
    CHECK(out.converged);
    CHECK(out.sweeps == 1);
    // E vanishes at every snapshot and the state never moves
    for (const auto& fields : out.force_history) {
        REQUIRE(fields.size() == 1);
        for (double e : fields[0].values) CHECK(std::abs(e) < 1e-12);
    }
    CHECK(max_abs_diff(out.snapshots.back(), sc.f0) < 1e-12);
}

TEST_CASE("run_simulation: Poisson contraction, conservation, positivity") {
    Scenario sc = poisson_scenario(64, 0.1);
    sc.norm_requests = {NormRequest{"sobolev", 0, 2.0}};
    SimOutput out = run_simulation(sc);
    CHECK(out.converged);
    for (double r : out.contraction_ratios) CHECK(r <= 0.5 + 1e-3);

    const double m0 = total_mass(out.snapshots.front());
    const double f0max = max_abs(out.snapshots.front());
    double worst_mass = 0.0, worst_min = 0.0;
    for (const auto& snap : out.snapshots) {
        worst_mass = std::max(worst_mass, std::abs(total_mass(snap) - m0) / m0);
        for (double x : snap.values) worst_min = std::min(worst_min, x);
    }
    CHECK(worst_mass <= 1e-6);
    CHECK(worst_min >= -1e-6 * f0max);

    // total energy: kinetic + field
    auto energy = [&](size_t idx) {
        return kinetic_energy(out.snapshots[idx]) +
               field_energy(out.force_history[idx][0]);
    };
    const double e0 = energy(0);
    for (size_t q = 1; q < out.snapshots.size(); ++q)
        CHECK(std::abs(energy(q) - e0) / e0 <= 1e-4);

    // requested norms recorded per snapshot
    CHECK(out.norm_history.entries.size() == out.snapshots.size());
}

TEST_CASE("run_simulation: mass drift shrinks at order >= 3 under refinement") {
    auto drift = [&](int nv) {
        Scenario sc;
        sc.grid = build_grid(32, nv, 8.0);
        sc.advection = AdvectionField::classical();
        sc.model = ForceModel::poisson(PoissonSign::repulsive);
        sc.f0 = perturbed_gaussian(sc.grid, 0.1);
        sc.T = 0.1;
        sc.dt = 1e-3;
        SimOutput out = run_simulation(sc);
        const double m0 = total_mass(out.snapshots.front());
        double worst = 0.0;
        for (const auto& snap : out.snapshots)
            worst = std::max(worst, std::abs(total_mass(snap) - m0) / m0);
        return worst;
    };
    const double d1 = drift(256);
    const double d2 = drift(512);
    INFO("drift " << d1 << " -> " << d2 << " order " << std::log2(d1 / d2));
    CHECK(std::log2(d1 / d2) >= 2.95);
}

TEST_CASE("run_simulation: unreachable tolerance raises convergence_error") {
    Scenario sc = poisson_scenario(32, 0.05);
    sc.picard_tol = 1e-300;
    sc.picard_max = 4;
    try {
        run_simulation(sc);
        FAIL("expected convergence_error");
    } catch (const convergence_error& e) {
        CHECK(e.ratios.size() >= 1);
    }
}

TEST_CASE("bisect_horizon returns a gated horizon") {
    Scenario sc = poisson_scenario(32, 0.2);
    auto [T, out] = bisect_horizon(sc, 0.5 + 1e-3, 1e-2);
    CHECK(T > 0.0);
    CHECK(out.converged);
    for (double r : out.contraction_ratios) CHECK(r <= 0.5 + 1e-3);
}

TEST_CASE("scenario validation rejects bad states") {
    Scenario sc = poisson_scenario(32, 0.1);
    sc.T = -1.0;
    CHECK_THROWS_AS(sc.validate(), config_error);
    sc.T = 0.1;
    sc.f0 = sample_phase(sc.grid, [](double, double) { return 1.0; });
    CHECK_THROWS_AS(sc.validate(), config_error); // no decay
}
