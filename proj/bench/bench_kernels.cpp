// Serial reference vs OpenMP for the trial-parallel kernels.
// Arg 0 selects Execution::Serial, arg 1 Execution::Parallel.

#include <benchmark/benchmark.h>

#include "vanspec/eta.hpp"
#include "vanspec/partitions.hpp"
#include "vanspec/reconstruct.hpp"
#include "vanspec/scenarios.hpp"
#include "vanspec/spectrum.hpp"

using namespace vanspec;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_Aesd(benchmark::State& state) {
    const auto dist = fading_distribution(5.0);
    for (auto _ : state) benchmark::DoNotOptimize(aesd(dist, 10, 250, 16, 1, 0, mode(state)));
    label(state);
}

void BM_TraceMoments(benchmark::State& state) {
    const auto dist = uniform_distribution(1);
    for (auto _ : state) benchmark::DoNotOptimize(empirical_trace_moments(dist, 128, 256, 16, 1, 4, mode(state)));
    label(state);
}

void BM_CoefficientTable(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(coefficient_table(6, CoefficientMethod::ExtrapolatedCount, mode(state)));
    label(state);
}

void BM_EtaTable(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(EtaTable::build_covering(1, 0.1, 1.0, 64, 4, 1, 8, mode(state)));
    label(state);
}

void BM_MseMonteCarlo(benchmark::State& state) {
    const auto dist = hole_distribution(0.8, 1);
    const std::vector<double> gammas{1.0, 10.0, 100.0};
    for (auto _ : state) benchmark::DoNotOptimize(mse_monte_carlo(dist, 64, 128, gammas, 16, 1, mode(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_Aesd)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraceMoments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoefficientTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EtaTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MseMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
