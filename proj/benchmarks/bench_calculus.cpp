#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "vlab/calculus.hpp"
#include "vlab/models.hpp"

using namespace vlab;

namespace {

constexpr double kPi = std::numbers::pi;

PhaseField make_field(int n) {
    Grid g = build_grid(n, n, 8.0);
    return sample_phase(g, [](double x, double v) {
        return std::cos(2.0 * kPi * x) * std::exp(-0.5 * v * v);
    });
}

void WeightedSobolevNorm(benchmark::State& state) {
    PhaseField f = make_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(weighted_sobolev_norm(f, 2, 2.0));
}
BENCHMARK(WeightedSobolevNorm)->Arg(128)->Arg(256);

void AnisoNorm(benchmark::State& state) {
    PhaseField f = make_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(aniso_norm(f, 1.0, -2.0));
}
BENCHMARK(AnisoNorm)->Arg(128)->Arg(256);

void PoissonSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SpatialField rho = sample_spatial(n, [](double x) {
        return std::cos(2.0 * kPi * x) + 0.2 * std::sin(6.0 * kPi * x);
    });
    for (auto _ : state) {
        SpatialField e = poisson_force(rho, PoissonSign::repulsive);
        benchmark::DoNotOptimize(e.values.data());
    }
}
BENCHMARK(PoissonSolve)->Arg(256)->Arg(1024);

} // namespace
