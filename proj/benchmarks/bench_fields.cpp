#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "horizonwave/field.hpp"

using namespace horizonwave;

namespace {

Field smooth(const SpatialTorus& t, double phase) {
    return Field::from_function(t, [phase](std::span<const double> x) {
        double s = phase;
        for (double xi : x) s += std::sin(xi + phase);
        return std::exp(0.3 * s);
    });
}

void BM_MultiplyCircle(benchmark::State& state) {
    const auto t = SpatialTorus::circle(2 * std::numbers::pi, static_cast<int>(state.range(0)));
    const Field a = smooth(t, 0.1);
    const Field b = smooth(t, 0.7);
    for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MultiplyCircle)->RangeMultiplier(4)->Range(32, 8192)->Complexity(benchmark::oNLogN);

void BM_MultiplyTorus2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpatialTorus t({2 * std::numbers::pi, 2 * std::numbers::pi}, {n, n});
    const Field a = smooth(t, 0.1);
    const Field b = smooth(t, 0.7);
    for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b));
}
BENCHMARK(BM_MultiplyTorus2)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_SobolevNorm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SpatialTorus t({2 * std::numbers::pi, 2 * std::numbers::pi}, {n, n});
    const Field a = smooth(t, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm(a, 3.0));
}
BENCHMARK(BM_SobolevNorm)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
