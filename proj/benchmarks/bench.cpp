#include <benchmark/benchmark.h>

#include "fracsparse/experiments.hpp"
#include "fracsparse/numerics.hpp"
#include "fracsparse/operators.hpp"
#include "fracsparse/sparse.hpp"
#include "fracsparse/weights.hpp"

using namespace fracsparse;

namespace {

GridFunction test_function(int64_t n) {
    TestFunctionRng rng(12);
    return rng.smooth_random(Box(0.0, 1.0, 1), n);
}

void BM_KernelApply(benchmark::State& state) {
    int64_t n = state.range(0);
    GridFunction f = test_function(n);
    FracKernel kernel(f.box(), n, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(kernel.apply(f));
    state.SetComplexityN(n);
}
BENCHMARK(BM_KernelApply)->Range(1 << 8, 1 << 12)->Complexity();

void BM_Commutator(benchmark::State& state) {
    int64_t n = state.range(0);
    GridFunction f = test_function(n);
    TestFunctionRng rng(5);
    GridFunction b = rng.smooth_random(f.box(), n);
    FracKernel kernel(f.box(), n, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(iterated_commutator(kernel, b, 2, f));
}
BENCHMARK(BM_Commutator)->Range(1 << 8, 1 << 11);

void BM_FracMaximal(benchmark::State& state) {
    int64_t n = state.range(0);
    GridFunction f = test_function(n);
    LatticeSystem sys(f.box(), n);
    CubeFamily fam = CubeFamily::full(sys);
    for (auto _ : state) benchmark::DoNotOptimize(frac_maximal(f, 0.5, sys, fam));
}
BENCHMARK(BM_FracMaximal)->Range(1 << 8, 1 << 12);

void BM_ApqScan(benchmark::State& state) {
    int64_t n = state.range(0);
    Box box(-1.0, 2.0, 1);
    Weight w = power_weight(0.25, 4.0, box, n);
    LatticeSystem sys(box, n);
    CubeFamily fam = CubeFamily::full(sys);
    for (auto _ : state)
        benchmark::DoNotOptimize(apq_constant(w, 4.0 / 3.0, 4.0, sys, fam).value);
}
BENCHMARK(BM_ApqScan)->Range(1 << 10, 1 << 13);

void BM_SparseDomination(benchmark::State& state) {
    int64_t n = state.range(0);
    GridFunction f = test_function(n);
    TestFunctionRng rng(7);
    GridFunction b = rng.smooth_random(f.box(), n);
    for (auto _ : state) benchmark::DoNotOptimize(build_sparse_domination(f, b, 0.5, 1));
}
BENCHMARK(BM_SparseDomination)->Range(1 << 6, 1 << 8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
