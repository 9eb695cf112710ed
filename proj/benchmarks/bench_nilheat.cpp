#include <benchmark/benchmark.h>

#include "nilheat/group.hpp"
#include "nilheat/kernel.hpp"
#include "nilheat/parallel.hpp"
#include "nilheat/propagator.hpp"

using namespace nilheat;

static void BM_MultiplyEngel(benchmark::State& state) {
    GroupPoint g = make_point(GroupTag::Engel, {0.3, -0.2, 0.1, 0.05});
    const GroupPoint h = make_point(GroupTag::Engel, {-0.1, 0.4, 0.2, -0.3});
    for (auto _ : state) {
        g = multiply(g, h);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_MultiplyEngel);

static void BM_MultiplyCartan(benchmark::State& state) {
    GroupPoint g = make_point(GroupTag::Cartan, {0.3, -0.2, 0.1, 0.05, 0.02});
    const GroupPoint h = make_point(GroupTag::Cartan, {-0.1, 0.4, 0.2, -0.3, 0.1});
    for (auto _ : state) {
        g = multiply(g, h);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_MultiplyCartan);

static void BM_Spectrum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(decompose({1.0, -2.0, 1.0}, {8.0, n}, 40));
}
BENCHMARK(BM_Spectrum)->Arg(512)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

static void BM_EngelKernelPoint(benchmark::State& state) {
    set_threads(1);
    const GroupPoint x = make_point(GroupTag::Engel, {0.3, -0.2, 0.1, 0.05});
    for (auto _ : state) benchmark::DoNotOptimize(heat_kernel_g4(x, 0.25));
}
BENCHMARK(BM_EngelKernelPoint)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
