// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to vary the team size.

#include <benchmark/benchmark.h>

#include "ueslab/controllers.hpp"
#include "ueslab/maps.hpp"
#include "ueslab/probe.hpp"

namespace {

using namespace ueslab;

EsParams quartic_asymptotic() {
    EsDesign d;
    d.alpha = {1.0};
    d.k = {0.3};
    d.omega = 5.0;
    d.omega_h = 3.0;
    d.schedule = Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0);
    return EsParams::assemble(d, maps::quartic_paper());
}

ProbeConfig probe_config(std::size_t trials) {
    ProbeConfig c;
    c.omega_values = {10.0, 50.0};
    c.epsilon = 0.5;
    c.delta = 0.5;
    c.horizon = 5.0;
    c.trials = trials;
    c.seed = 7;
    return c;
}

void BM_ProbeSerial(benchmark::State& state) {
    const auto map = maps::quartic_paper();
    const auto p = quartic_asymptotic();
    const auto cfg = probe_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(practical_stability_probe_serial(p, map, cfg));
}

void BM_ProbeParallel(benchmark::State& state) {
    const auto map = maps::quartic_paper();
    const auto p = quartic_asymptotic();
    const auto cfg = probe_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(practical_stability_probe(p, map, cfg));
}

void BM_PowerBoundsSerial(benchmark::State& state) {
    const auto map = maps::quadratic({1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 0.0, 0.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(
            verify_power_bounds_serial(map, 1.0, static_cast<std::size_t>(state.range(0)), 3));
}

void BM_PowerBoundsParallel(benchmark::State& state) {
    const auto map = maps::quadratic({1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 0.0, 0.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(
            verify_power_bounds(map, 1.0, static_cast<std::size_t>(state.range(0)), 3));
}

}  // namespace

BENCHMARK(BM_ProbeSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProbeParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerBoundsSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerBoundsParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
