// Micro benchmarks for the hot paths: transform, fits, selection.
#include <benchmark/benchmark.h>

#include <bit>

#include "wavesel/basis.hpp"
#include "wavesel/estimator.hpp"
#include "wavesel/selection.hpp"
#include "wavesel/signals.hpp"
#include "wavesel/transform.hpp"

using namespace wavesel;

static void BM_Analyze(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const RegressionSample s = generate(doppler(), noise_by_name("l1"), n, 1);
    const OrthoFilter f = daubechies_filter(8);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(s.y, f));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Analyze)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_OrderedPyramid(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const RegressionSample s = generate(wave(), noise_by_name("h1"), n, 2);
    const OrthoFilter f = daubechies_filter(8);
    for (auto _ : state) {
        OrderedPyramid p(s.y, f);
        benchmark::DoNotOptimize(p.fitted(n / 4));
    }
}
BENCHMARK(BM_OrderedPyramid)->Arg(1024)->Arg(4096);

static void BM_GramFit(benchmark::State& state) {
    const auto D = static_cast<std::size_t>(state.range(0));
    const RegressionSample s = generate(heavisine(), noise_by_name("l1"), 1024, 3);
    const Model m = build_periodized_wavelet(daubechies_filter(8), std::countr_zero(D) - 1);
    for (auto _ : state) benchmark::DoNotOptimize(fit_gram(s.x, s.y, m));
}
BENCHMARK(BM_GramFit)->Arg(16)->Arg(64);

static void BM_FitCollection(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const RegressionSample s = generate(spikes(), noise_by_name("l2"), n, 4);
    const ModelCollection c = make_collection("wavelet:db8", n);
    const FoldScheme folds = FoldScheme::interleaved(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(fit_collection(s, c, folds));
}
BENCHMARK(BM_FitCollection)->Arg(1024)->Arg(4096);

static void BM_SelectAll(benchmark::State& state) {
    const RegressionSample s = generate(wave(), noise_by_name("l1"), 4096, 5);
    const FittedCollection fc = fit_collection(s, make_collection("wavelet:db8", 4096), FoldScheme::interleaved(4096, 2));
    for (auto _ : state)
        for (const auto& m : {"sh", "cp", "vfcv", "penvf"}) benchmark::DoNotOptimize(select_by_method(fc, m));
}
BENCHMARK(BM_SelectAll);
BENCHMARK_MAIN();
