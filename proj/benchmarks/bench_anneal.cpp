#include <benchmark/benchmark.h>

#include "hcanneal/anneal.hpp"
#include "hcanneal/experiments.hpp"
#include "hcanneal/instance.hpp"

namespace {

using namespace hcanneal;

Instance planted_instance(int n, double m, std::uint64_t seed) {
    return gen_random({GenKind::random_planted, n, m, seed});
}

void BM_TourLength(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Instance inst = planted_instance(n, 0.7, 1);
    const Tour tour = random_cycle(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(tour_length(inst, tour));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TourLength)->Arg(150)->Arg(500);

void BM_ProposeSwap(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Instance inst = planted_instance(n, 0.7, 1);
    const Tour tour = random_cycle(n, 2);
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(propose_swap(inst, tour, rng));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProposeSwap)->Arg(150)->Arg(500);

void BM_ProposeTransport(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Instance inst = planted_instance(n, 0.7, 1);
    const Tour tour = random_cycle(n, 2);
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(propose_transport(inst, tour, rng));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProposeTransport)->Arg(150)->Arg(500);

// One full annealing step worth of proposals on a planted instance, the
// workload the sweep experiments are made of.
void BM_AnnealTrial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Instance inst = planted_instance(n, 0.7, 1);
    AnnealParams params;
    params.na = 5;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        params.seed = seed++;
        benchmark::DoNotOptimize(anneal(inst, params));
    }
}
BENCHMARK(BM_AnnealTrial)->Arg(60)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_GenRandom(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(gen_random({GenKind::random_planted, n, 0.7, seed++}));
}
BENCHMARK(BM_GenRandom)->Arg(150)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_BruteForce(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Instance inst = planted_instance(n, 1.2, 7);
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_hc(inst));
}
BENCHMARK(BM_BruteForce)->Arg(10)->Arg(14)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
