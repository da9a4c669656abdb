#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "vlab/solver.hpp"

using namespace vlab;

namespace {

constexpr double kPi = std::numbers::pi;

PhaseField make_state(int n) {
    Grid g = build_grid(n, n, 8.0);
    return sample_phase(g, [](double x, double v) {
        return (1.0 + 0.1 * std::cos(2.0 * kPi * x)) * std::exp(-0.5 * v * v) /
               std::sqrt(2.0 * kPi);
    });
}

void TransportStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    PhaseField f = make_state(n);
    auto force = force_assemble(ForceModel::poisson(PoissonSign::repulsive), f);
    AdvectionField a = AdvectionField::classical();
    for (auto _ : state) {
        PhaseField out = transport_step(f, *force, a, 1e-3);
        benchmark::DoNotOptimize(out.values.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(TransportStep)->Arg(64)->Arg(128)->Arg(256);

void ForceAssemble(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    PhaseField f = make_state(n);
    ForceModel model = ForceModel::poisson(PoissonSign::repulsive);
    for (auto _ : state) {
        auto force = force_assemble(model, f);
        benchmark::DoNotOptimize(force.get());
    }
}
BENCHMARK(ForceAssemble)->Arg(128)->Arg(256);

} // namespace

BENCHMARK_MAIN();
