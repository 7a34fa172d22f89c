#include <benchmark/benchmark.h>

#include "iadmm/linalg.hpp"
#include "iadmm/operators.hpp"
#include "iadmm/rng.hpp"

using namespace iadmm;

static void BM_soft_threshold(benchmark::State& state) {
    SeededRng rng(1);
    const Matrix x = randn_matrix(rng, state.range(0), state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(soft_threshold(x, 0.5));
    }
}
BENCHMARK(BM_soft_threshold)->Arg(100)->Arg(200)->Arg(500);

static void BM_svd(benchmark::State& state) {
    SeededRng rng(2);
    const Matrix x = randn_matrix(rng, state.range(0), state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(svd(x));
    }
}
BENCHMARK(BM_svd)->Arg(50)->Arg(100)->Arg(200);

static void BM_svt(benchmark::State& state) {
    SeededRng rng(3);
    const Matrix x = randn_matrix(rng, state.range(0), state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(svt(x, 0.5));
    }
}
BENCHMARK(BM_svt)->Arg(50)->Arg(100)->Arg(200);

BENCHMARK_MAIN();
