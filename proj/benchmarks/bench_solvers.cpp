#include <benchmark/benchmark.h>

#include "iadmm/admm.hpp"
#include "iadmm/rpcp.hpp"

using namespace iadmm;

namespace {

AdmmParams params_for(AdmmVariant variant) {
    AdmmParams params;
    params.variant = variant;
    params.gamma = 0.01;
    switch (variant) {
        case AdmmVariant::gadmm:
            params.lambda_schedule = constant_lambda(1.6);
            break;
        case AdmmVariant::iadmm_chen:
            params.alpha = constant_alpha(0.3);
            break;
        case AdmmVariant::inertial:
            params.alpha = constant_alpha(0.2);
            params.lambda_schedule = constant_lambda(1.2496);
            break;
        default:
            break;
    }
    return params;
}

void run_step_benchmark(benchmark::State& state, AdmmVariant variant) {
    const Index m = state.range(0);
    const RpcpInstance instance = generate_rpcp(m, m / 20, m * m / 20, 7);
    const TwoBlockProblem problem = as_problem(instance);
    const AdmmParams params = params_for(variant);
    AdmmState admm_state = initial_admm_state(problem);
    for (auto _ : state) {
        switch (variant) {
            case AdmmVariant::classical:
                admm_state = step_classical(admm_state, problem, params);
                break;
            case AdmmVariant::gadmm:
                admm_state = step_gadmm(admm_state, problem, params);
                break;
            case AdmmVariant::iadmm_chen:
                admm_state = step_iadmm_chen(admm_state, problem, params);
                break;
            case AdmmVariant::inertial:
                admm_state = step_inertial(admm_state, problem, params);
                break;
        }
        benchmark::DoNotOptimize(admm_state.u.data());
    }
}

}  // namespace

static void BM_step_classical(benchmark::State& state) {
    run_step_benchmark(state, AdmmVariant::classical);
}
static void BM_step_gadmm(benchmark::State& state) {
    run_step_benchmark(state, AdmmVariant::gadmm);
}
static void BM_step_iadmm_chen(benchmark::State& state) {
    run_step_benchmark(state, AdmmVariant::iadmm_chen);
}
static void BM_step_inertial(benchmark::State& state) {
    run_step_benchmark(state, AdmmVariant::inertial);
}

BENCHMARK(BM_step_classical)->Arg(100)->Arg(200);
BENCHMARK(BM_step_gadmm)->Arg(100)->Arg(200);
BENCHMARK(BM_step_iadmm_chen)->Arg(100)->Arg(200);
BENCHMARK(BM_step_inertial)->Arg(100)->Arg(200);

BENCHMARK_MAIN();
