#include <benchmark/benchmark.h>

#include <vector>

#include "glyco/estimator.hpp"
#include "glyco/experiment.hpp"
#include "glyco/hermite.hpp"
#include "glyco/kernel.hpp"
#include "glyco/rng.hpp"
#include "glyco/synth.hpp"

namespace {

void BM_HermiteSequence(benchmark::State& state) {
    std::vector<double> out(static_cast<std::size_t>(state.range(0)) + 1);
    double x = 0.1;
    for (auto _ : state) {
        glyco::hermite_sequence(x, out);
        benchmark::DoNotOptimize(out.data());
        x += 1e-9;
    }
}
BENCHMARK(BM_HermiteSequence)->Arg(8)->Arg(24)->Arg(48);

void BM_KernelTable(benchmark::State& state) {
    const glyco::KernelParams p{static_cast<int>(state.range(0)), 1.0, static_cast<int>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(glyco::KernelTable(p).coefficients().data());
}
BENCHMARK(BM_KernelTable)->Args({3, 1})->Args({7, 2})->Args({7, 7});

void BM_KernelEval(benchmark::State& state) {
    const glyco::KernelTable t({static_cast<int>(state.range(0)), 1.0, 2});
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(t(x));
        x = x > 2.0 ? 0.0 : x + 1e-3;
    }
}
BENCHMARK(BM_KernelEval)->Arg(3)->Arg(5)->Arg(7);

void BM_Estimator(benchmark::State& state) {
    glyco::Engine eng(1);
    glyco::SampleSet set(7);
    std::vector<double> p(7);
    for (std::int64_t j = 0; j < state.range(0); ++j) {
        for (auto& v : p) v = glyco::uniform01(eng) - 0.5;
        set.add(p, 100.0 + 100.0 * glyco::uniform01(eng));
    }
    const glyco::Estimator est(std::move(set), {5, 1.0, 2});
    for (auto& v : p) v = 0.0;
    for (auto _ : state) benchmark::DoNotOptimize(est(p));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Estimator)->Arg(100)->Arg(1000)->Arg(3000);

void BM_Trial(benchmark::State& state) {
    const auto series = glyco::synth_series(3, 25, 230);
    glyco::ExperimentConfig cfg;
    cfg.q = 2;
    std::size_t t = 0;
    for (auto _ : state) benchmark::DoNotOptimize(glyco::run_trial(cfg, series, t++).test_windows);
}
BENCHMARK(BM_Trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
