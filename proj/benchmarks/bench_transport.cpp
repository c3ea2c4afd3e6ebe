#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "horizonwave/horizon_integral.hpp"
#include "horizonwave/transport_solver.hpp"

using namespace horizonwave;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

Field rhs_on(const SpatialTorus& t) {
    return Field::from_function(t, [](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) s += std::cos((a + 1.0) * x[a]) + 0.5 * std::sin(x[a]);
        return s;
    });
}

void BM_SpectralTorus2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpatialTorus t({2 * std::numbers::pi, 2 * std::numbers::pi}, {n, n});
    const TransportProblem p{t, {1.0, kGolden}, 1.0, std::nullopt, rhs_on(t), {}};
    for (auto _ : state) benchmark::DoNotOptimize(solve_spectral(p));
}
BENCHMARK(BM_SpectralTorus2)->Arg(32)->Arg(128);

void BM_SpectralVariableBeta(benchmark::State& state) {
    const auto t = SpatialTorus::circle(2 * std::numbers::pi, static_cast<int>(state.range(0)));
    const Field beta = Field::from_function(t, [](std::span<const double> x) { return 1.0 + 0.3 * std::cos(x[0]); });
    const TransportProblem p{t, {-2.0}, 1.0, beta, rhs_on(t), {}};
    for (auto _ : state) benchmark::DoNotOptimize(solve_spectral(p));
}
BENCHMARK(BM_SpectralVariableBeta)->Arg(32)->Arg(128);

void BM_FlowQuadratureCircle(benchmark::State& state) {
    const auto t = SpatialTorus::circle(2 * std::numbers::pi, 32);
    const Field rhs = rhs_on(t);
    const Field alpha = Field::constant(t, 1.0);
    FlowQuadrature q;
    q.panels = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_flow_quadrature(t, {-2.0}, alpha, rhs, q));
}
BENCHMARK(BM_FlowQuadratureCircle)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_HorizonIntegral(benchmark::State& state) {
    const auto t = SpatialTorus::circle(2 * std::numbers::pi, static_cast<int>(state.range(0)));
    const Field u0 = rhs_on(t);
    for (auto _ : state) benchmark::DoNotOptimize(remark22_first_derivative(u0));
}
BENCHMARK(BM_HorizonIntegral)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
