#include <benchmark/benchmark.h>

#include <vector>

#include "speedlab/harris.hpp"
#include "speedlab/multiline.hpp"
#include "speedlab/permutation_algebra.hpp"
#include "speedlab/speed_lab.hpp"

using namespace speedlab;

// Projected TASEP run of particles 0..4 up to time t (the speed-estimation workhorse).
static void BM_KineticProjected(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    RngStream rng(1, 1);
    std::uint64_t events = 0;
    for (auto _ : state) {
        const auto r = simulate_projected({Dynamics::tasep, 1.0, t, 0, 4}, rng);
        events += r.events;
        benchmark::DoNotOptimize(r.final);
    }
    state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_KineticProjected)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

// Harris construction on a full canonical window of 2t+1 sites, noise sampling included.
static void BM_HarrisCanonical(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    const auto half = static_cast<Site>(2 * t);
    const auto init = canonical_config(-half, static_cast<std::size_t>(2 * half + 1));
    RngStream rng(2, 1);
    for (auto _ : state) {
        const auto noise = sample_noise(rng, -half, half, t, Dynamics::tasep);
        benchmark::DoNotOptimize(simulate(init, noise, {Dynamics::tasep, 1.0, AsepDriver::marks, t, nullptr}));
    }
}
BENCHMARK(BM_HarrisCanonical)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_Collapse(benchmark::State& state) {
    const std::vector<double> lambda{0.3, 0.3, 0.4};
    const auto length = static_cast<std::size_t>(state.range(0));
    RngStream rng(3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(sample_stationary(lambda, length, -1, rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Collapse)->Arg(2)->Arg(1000);

static void BM_WordDistribution(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    std::vector<int> word;
    for (int r = 0; r < 3; ++r)
        for (int i = 0; i + 1 < m; ++i) word.push_back(i);
    for (auto _ : state) benchmark::DoNotOptimize(exact_word_distribution(word, m, 0.7));
}
BENCHMARK(BM_WordDistribution)->Arg(4)->Arg(7);
BENCHMARK_MAIN();
