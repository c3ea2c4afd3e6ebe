#include <benchmark/benchmark.h>

#include <numbers>

#include "horizonwave/asymptotic_engine.hpp"
#include "horizonwave/evolution.hpp"

using namespace horizonwave;

namespace {

void BM_LinearAsymptotics(benchmark::State& state) {
    const auto model = make_misner(Sign::Plus, 2 * std::numbers::pi, 64);
    const auto op = operator_preset(model, "box_plus_one");
    const Field u0 = Field::from_function(model.torus, [](std::span<const double> x) { return std::cos(x[0]); });
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(linear_asymptotics(op, u0, {}, n));
}
BENCHMARK(BM_LinearAsymptotics)->Arg(4)->Arg(8)->Arg(16);

void BM_SemilinearAsymptotics(benchmark::State& state) {
    const auto model = make_misner(Sign::Plus, 2 * std::numbers::pi, 64);
    const auto op = operator_preset(model, "box");
    const Field u0 = Field::from_function(model.torus, [](std::span<const double> x) { return 0.1 * std::cos(x[0]); });
    const auto f = Nonlinearity::polynomial({0.0, 0.0, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(semilinear_asymptotics(op, f, u0, 8));
}
BENCHMARK(BM_SemilinearAsymptotics);

void BM_BesselCharacteristic(benchmark::State& state) {
    const auto model = make_misner(Sign::Plus, 2 * std::numbers::pi, static_cast<int>(state.range(0)));
    const auto op = operator_preset(model, "box_plus_one");
    const Field u0 = Field::constant(model.torus, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(characteristic_solve(op, u0, {}, 8, 1e-3, 1.0));
}
BENCHMARK(BM_BesselCharacteristic)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Picard(benchmark::State& state) {
    const auto model = make_misner(Sign::Plus, 2 * std::numbers::pi, 32);
    const auto op = operator_preset(model, "box");
    const Field u0 = Field::from_function(model.torus, [](std::span<const double> x) { return 0.1 * std::cos(x[0]); });
    const auto f = Nonlinearity::polynomial({0.0, 0.0, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(picard_iterate(op, f, u0, 0, 0.3, 1e-3));
}
BENCHMARK(BM_Picard)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
