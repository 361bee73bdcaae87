// Serial reference vs OpenMP repetition-parallel experiment runner.

#include <benchmark/benchmark.h>

#include "bhtrl/config.hpp"
#include "bhtrl/experiment.hpp"

namespace {

bhtrl::ExperimentConfig bench_config(int reps) {
    bhtrl::ExperimentConfig c = bhtrl::parse_config(R"({
        "env": {"family": "riverswim"},
        "horizon": 20, "episodes": 50, "master_seed": 1,
        "agents": [{"kind": "cb_ps"}, {"kind": "mdp_ps"}, {"kind": "bht_rl"}]
    })");
    c.repetitions = reps;
    return c;
}

void BM_Serial(benchmark::State& state) {
    const auto config = bench_config(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bhtrl::run_experiment_serial(config));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Parallel(benchmark::State& state) {
    const auto config = bench_config(static_cast<int>(state.range(0)));
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(bhtrl::run_experiment(config, threads));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Args({8, 0})->Args({32, 0})->Args({32, 1})->Args({32, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
