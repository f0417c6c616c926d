#pragma once

#include <cstdint>
#include <vector>

#include "harness/dual.hpp"
#include "harness/local_search.hpp"

namespace harness {

struct AlphaConstructParams {
    double alpha = 1.2;             // path-cost factor over the shortest path
    int n_paths = 7;                // alpha-path set size per cable
    int n_initial = 5;              // constructed initial solutions
    std::uint64_t sequence_seed = 1;
};

using AlphaPathSets = std::vector<std::vector<Path>>;  // per cable

// Spatially distinct alpha-shortest path sets, one per cable, generated on
// base costs (cost ratios are invariant under uniform weight scaling).
AlphaPathSets generate_alpha_sets(const Instance& instance,
                                  const AlphaConstructParams& params);

// Builds one initial routing by processing cables in `sequence` order:
// each cable is rerouted with the shared-edge discount against the union of
// every other cable's current path set, then its set collapses to the chosen
// path.
Routing construct_initial_routing(const Instance& instance, const AlphaPathSets& phi_sets,
                                  const std::vector<int>& sequence,
                                  LocalSearchContext& ctx);

struct AlphaSolveResult {
    Routing best_routing;
    double f_best = kInf;
    std::vector<CandidateSolution> candidates;
};

// Constructs n_initial routings from distinct cable sequences (identity
// first, then seeded shuffles) and polishes each with the local search.
// Polishing runs are independent and execute on up to `threads` workers.
AlphaSolveResult run_alpha_solver(const Instance& instance,
                                  const AlphaConstructParams& params = {},
                                  GoalFieldCache* shared_cache = nullptr,
                                  int threads = 1,
                                  const AlphaPathSets* precomputed_sets = nullptr);

}  // namespace harness
