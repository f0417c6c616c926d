#include <benchmark/benchmark.h>

#include "harness/grid.hpp"
#include "harness/search.hpp"

using namespace harness;

namespace {

RoutingGraph cube_graph(int side) {
    GridSpec spec;
    spec.nx = side;
    spec.ny = side;
    spec.nz = side;
    return build_graph(spec, {});
}

}  // namespace

static void BM_BuildGraph(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    for (auto _ : state) {
        RoutingGraph g = cube_graph(side);
        benchmark::DoNotOptimize(g.num_edges());
    }
    state.SetComplexityN(state.range(0) * state.range(0) * state.range(0));
}
BENCHMARK(BM_BuildGraph)->Arg(8)->Arg(16)->Arg(24)->Complexity();

static void BM_Dijkstra(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const RoutingGraph g = cube_graph(side);
    for (auto _ : state) {
        DistanceField f = dijkstra(g, 0);
        benchmark::DoNotOptimize(f.dist.back());
    }
    state.SetComplexityN(g.num_nodes());
}
BENCHMARK(BM_Dijkstra)->Arg(8)->Arg(16)->Arg(24)->Complexity();

static void BM_AStarCornerToCorner(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const RoutingGraph g = cube_graph(side);
    const NodeId goal = g.num_nodes() - 1;
    const DistanceField h = dijkstra(g, goal);
    for (auto _ : state) {
        auto path = astar(g, 0, goal, h);
        benchmark::DoNotOptimize(path.size());
    }
    state.SetComplexityN(g.num_nodes());
}
BENCHMARK(BM_AStarCornerToCorner)->Arg(8)->Arg(16)->Arg(24)->Complexity();

static void BM_AlphaPaths(benchmark::State& state) {
    const RoutingGraph g = cube_graph(10);
    const NodeId goal = g.num_nodes() - 1;
    for (auto _ : state) {
        auto paths = alpha_shortest_paths(g, 0, goal, 1.2, 7);
        benchmark::DoNotOptimize(paths.size());
    }
}
BENCHMARK(BM_AlphaPaths);

BENCHMARK_MAIN();
