#include <benchmark/benchmark.h>

#include "coinc/lifting.hpp"

using namespace coinc;

static void BM_Gl2Order(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(gl2_order(720720));
}
BENCHMARK(BM_Gl2Order);

static void BM_ClosureSl2(benchmark::State& state) {
    const u64 n = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(full_sl2(n).order());
    state.SetLabel("SL2(" + std::to_string(n) + ")");
}
BENCHMARK(BM_ClosureSl2)->Arg(8)->Arg(16)->Arg(25)->Arg(27);

static void BM_DerivedSubgroup(benchmark::State& state) {
    MatGroup g = full_gl2(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(derived_subgroup(g).order());
}
BENCHMARK(BM_DerivedSubgroup)->Arg(5)->Arg(8)->Arg(9);

static void BM_GroupSplitLift(benchmark::State& state) {
    MatGroup g = full_gl2(3);
    for (auto _ : state) {
        GroupLiftResult r = group_split_liftable(g, 9);
        benchmark::DoNotOptimize(r.status);
    }
}
BENCHMARK(BM_GroupSplitLift);

static void BM_ElementLiftFiber(benchmark::State& state) {
    Mat2 t = gen_T(25);
    for (auto _ : state) benchmark::DoNotOptimize(element_split_liftable(t, 125).status);
}
BENCHMARK(BM_ElementLiftFiber);

BENCHMARK_MAIN();
