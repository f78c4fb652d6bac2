#include "reskit/chain.hpp"
#include "reskit/metrics.hpp"
#include "reskit/narma.hpp"
#include "reskit/readout.hpp"
#include "reskit/signals.hpp"
#include "reskit/simulate.hpp"

#include <benchmark/benchmark.h>

using namespace reskit;

namespace {

ChainConfig five_modules() {
    ChainConfig config;
    config.modules.assign(5, ModuleState::parse("000"));
    return config;
}

StateTrajectory sample_states() {
    const ChainModel model = build_chain(five_modules());
    const SampledSignal input = triple_harmonic(0.005, 10.0, 3000.0);
    return simulate(model, input, 10.0).trajectory;
}

} // namespace

static void BM_Simulate(benchmark::State& state) {
    const ChainModel model = build_chain(five_modules());
    const SampledSignal input = triple_harmonic(0.005, 5.0, 3000.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(model, input, 5.0));
    }
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

static void BM_TrainReadout(benchmark::State& state) {
    static const StateTrajectory states = sample_states();
    NarmaParams params;
    params.order = 10;
    const Eigen::VectorXd target =
        narma_target(Eigen::VectorXd(states.displacements.row(0).transpose()), params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_readout(states, target));
    }
}
BENCHMARK(BM_TrainReadout)->Unit(benchmark::kMillisecond);

static void BM_Psi(benchmark::State& state) {
    static const StateTrajectory states = sample_states();
    const Eigen::VectorXd y = states.displacements.row(5).transpose();
    const Eigen::VectorXd p = states.displacements.row(6).transpose();
    for (auto _ : state) {
        benchmark::DoNotOptimize(psi(y, p, 60.0));
    }
}
BENCHMARK(BM_Psi)->Unit(benchmark::kMicrosecond);

static void BM_CorrelationMatrix(benchmark::State& state) {
    static const StateTrajectory states = sample_states();
    for (auto _ : state) {
        benchmark::DoNotOptimize(correlation_matrix(states));
    }
}
BENCHMARK(BM_CorrelationMatrix)->Unit(benchmark::kMicrosecond);

static void BM_NarmaTarget(benchmark::State& state) {
    const SampledSignal input = triple_harmonic(1.0, 100.0, 60.0);
    NarmaParams params;
    params.order = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(narma_target(input, params));
    }
}
BENCHMARK(BM_NarmaTarget)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
