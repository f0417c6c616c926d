#include <benchmark/benchmark.h>

#include "harness/bench.hpp"
#include "harness/construct.hpp"
#include "harness/dual.hpp"
#include "harness/local_search.hpp"

using namespace harness;

namespace {

LoadedScene bench_scene(int cables) {
    return generate_clustered_scene({20, 14, 8}, 1.0, cables, 2.0, 8.0, 3);
}

}  // namespace

static void BM_LocalSearch(benchmark::State& state) {
    const LoadedScene scene = bench_scene(static_cast<int>(state.range(0)));
    const Instance inst = scene.instance(0.5);
    GoalFieldCache cache(*scene.graph);
    LocalSearchContext ctx(cache);
    const Routing seed = shortest_path_routing(inst, ctx);
    for (auto _ : state) {
        Routing out = run_local_search(inst, seed, ctx);
        benchmark::DoNotOptimize(out.paths.size());
    }
}
BENCHMARK(BM_LocalSearch)->Arg(4)->Arg(8)->Arg(16);

static void BM_DualSolver(benchmark::State& state) {
    const LoadedScene scene = bench_scene(static_cast<int>(state.range(0)));
    const Instance inst = scene.instance(0.5);
    for (auto _ : state) {
        GoalFieldCache cache(*scene.graph);
        DualSolveResult r = run_dual_solver(inst, {}, &cache);
        benchmark::DoNotOptimize(r.f_best);
    }
}
BENCHMARK(BM_DualSolver)->Arg(4)->Arg(8);

static void BM_AlphaSolver(benchmark::State& state) {
    const LoadedScene scene = bench_scene(static_cast<int>(state.range(0)));
    const Instance inst = scene.instance(0.5);
    for (auto _ : state) {
        GoalFieldCache cache(*scene.graph);
        AlphaSolveResult r = run_alpha_solver(inst, {}, &cache);
        benchmark::DoNotOptimize(r.f_best);
    }
}
BENCHMARK(BM_AlphaSolver)->Arg(4)->Arg(8);
