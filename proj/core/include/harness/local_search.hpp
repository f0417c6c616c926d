#pragma once

#include <memory>
#include <vector>

#include "harness/model.hpp"
#include "harness/search.hpp"

namespace harness {

// Relative threshold below which a move does not count as an improvement;
// rejects float-noise cycles while keeping acceptance effectively strict.
inline double improvement_tolerance(double f) {
    return 1e-9 * std::max(1.0, std::abs(f));
}

// Edges held fixed while one cable is rerouted; traversing them costs only
// the length term since their bundling cost is already paid.
struct FixedEdgeSet {
    std::vector<char> marked;  // per edge id

    static FixedEdgeSet from_paths(const RoutingGraph& graph,
                                   const std::vector<Path>& paths);
    // Marks the edges of every path except cable `exclude`.
    static FixedEdgeSet from_routing(const Instance& instance, const Routing& routing,
                                     int exclude);
};

// Shared state across local-search calls: per-goal heuristic fields and an
// optional trace of the objective after each accepted move.
struct LocalSearchContext {
    explicit LocalSearchContext(const RoutingGraph& graph)
        : owned_cache(std::make_shared<GoalFieldCache>(graph)), cache(owned_cache.get()) {}
    explicit LocalSearchContext(GoalFieldCache& shared) : cache(&shared) {}

    std::shared_ptr<GoalFieldCache> owned_cache;
    GoalFieldCache* cache = nullptr;
    std::vector<double>* move_trace = nullptr;
    long reroute_count = 0;  // single-cable reroute attempts
    std::vector<double> edge_scale_buf;  // scratch reused across reroutes
};

// Minimum-cost path for one cable under edge costs w_L*c_e on fixed edges
// and (w_L+w_B)*c_e elsewhere (A* with the precomputed length-cost field).
Path route_with_shared_discount(const Instance& instance, int cable,
                                const FixedEdgeSet& fixed, LocalSearchContext& ctx);

// Round-robin single-cable rerouting; accepts strictly improving
// replacements and stops after |K| consecutive non-improving attempts.
Routing optimize_cable_routes(const Instance& instance, const Routing& routing,
                              LocalSearchContext& ctx);

// Iteratively relocates branch points (singly and in adjacent pairs) to
// distance-field optima, accepting strict objective improvements only.
Routing optimize_branch_points(const Instance& instance, const Routing& routing,
                               LocalSearchContext& ctx);

// Alternates cable rerouting and branch-point relocation to a joint fixed
// point. Deterministic; the objective never increases.
Routing run_local_search(const Instance& instance, const Routing& initial,
                         LocalSearchContext& ctx);
Routing run_local_search(const Instance& instance, const Routing& initial);

// Per-cable shortest paths under base costs; the canonical seed routing.
Routing shortest_path_routing(const Instance& instance, LocalSearchContext& ctx);

}  // namespace harness
