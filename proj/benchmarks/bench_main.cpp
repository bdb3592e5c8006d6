#include <benchmark/benchmark.h>

#include "mflab/dirichlet.hpp"
#include "mflab/function_spec.hpp"
#include "mflab/multfun.hpp"
#include "mflab/primes.hpp"

using namespace mflab;

static void BM_SievePrimes(benchmark::State& state) {
    const auto limit = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sieve_primes(limit).size());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SievePrimes)->Arg(1'000'000)->Arg(10'000'000)->Arg(100'000'000)->Unit(benchmark::kMillisecond);

static void BM_SpfTable(benchmark::State& state) {
    const auto limit = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spf_table(limit).limit());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpfTable)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

// args: limit, threads
static void BM_SummatoryTrace(benchmark::State& state) {
    const auto f = builtin("liouville");
    const auto limit = static_cast<std::uint64_t>(state.range(0));
    SummatoryOptions opts;
    opts.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(summatory_trace(f, limit, CheckpointGrid::default_grid(), opts).checkpoints.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SummatoryTrace)->Args({1'000'000, 1})->Args({10'000'000, 1})->Args({10'000'000, 4})->Unit(benchmark::kMillisecond);

static void BM_Zeta(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(zeta({1.001, t}).value);
}
BENCHMARK(BM_Zeta)->Arg(0)->Arg(20)->Arg(1000);

static void BM_EulerProduct(benchmark::State& state) {
    const auto table = sieve_primes(1'000'000);
    const auto f = builtin("moebius");
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            F_euler_product(f, {1.001, 0.0}, {1'000'000, 1'000'000, 10'000}, table, HalaszDirection::zero()).value);
    }
}
BENCHMARK(BM_EulerProduct)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
