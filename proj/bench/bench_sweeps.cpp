// Serial reference vs OpenMP kernels on the Monte-Carlo sweeps and the
// multistart optimizer.

#include <benchmark/benchmark.h>

#include <random>

#include "bellri/optimizer.hpp"
#include "bellri/sweeps.hpp"

using namespace bellri;

namespace {

sweeps::Mode mode_of(const benchmark::State& state) {
    return state.range(1) == 0 ? sweeps::Mode::serial : sweeps::Mode::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "parallel"); }

void BM_TlmSweep(benchmark::State& state) {
    for (auto _ : state) {
        auto s = sweeps::tlm_samples(state.range(0), 1, 2, 4, mode_of(state));
        benchmark::DoNotOptimize(s.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    label(state);
}

void BM_CovMargins(benchmark::State& state) {
    for (auto _ : state) {
        auto s = sweeps::cov_psd_margins(state.range(0), 2, 2, 4, mode_of(state));
        benchmark::DoNotOptimize(s.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    label(state);
}

void BM_ClassifyBatch(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<CorrelatorTable> tables;
    for (int k = 0; k < state.range(0); ++k)
        tables.push_back(CorrelatorTable::from_pearson({{{u(rng), u(rng)}, {u(rng), u(rng)}}}));
    for (auto _ : state) {
        auto v = sweeps::classify_batch(tables, 1e-9, mode_of(state));
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    label(state);
}

void BM_Multistart(benchmark::State& state) {
    optimizer::OptConfig cfg;
    cfg.restarts = int(state.range(0));
    cfg.parallel = state.range(1) != 0;
    for (auto _ : state) {
        auto r = optimizer::maximize(optimizer::chsh_objective, cfg);
        benchmark::DoNotOptimize(r.best_value);
    }
    label(state);
}

}  // namespace

BENCHMARK(BM_TlmSweep)->ArgsProduct({{2000}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CovMargins)->ArgsProduct({{2000}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClassifyBatch)->ArgsProduct({{20000}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Multistart)->ArgsProduct({{16}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
