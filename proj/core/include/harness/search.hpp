#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "harness/grid.hpp"

namespace harness {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Single-source shortest distances with predecessor tree. Unreached nodes
// carry dist = +inf and pred = kNoNode.
struct DistanceField {
    NodeId source = kNoNode;
    std::vector<double> dist;
    std::vector<NodeId> pred;

    // Walks predecessors from `target` back to the source.
    std::vector<NodeId> path_to(NodeId target) const;
};

// Adjusts base edge costs without copying the graph. Effective cost of
// edge e is  base_cost(e) * scale * edge_scale[e] + edge_add[e] + sparse_add[e]
// with missing parts defaulting to identity/zero.
struct CostOverlay {
    double scale = 1.0;
    std::span<const double> edge_scale{};
    std::span<const double> edge_add{};
    const std::unordered_map<EdgeId, double>* sparse_add = nullptr;

    double effective(const RoutingGraph& g, EdgeId e) const {
        double c = g.edge(e).cost * scale;
        if (!edge_scale.empty()) c *= edge_scale[e];
        if (!edge_add.empty()) c += edge_add[e];
        if (sparse_add) {
            auto it = sparse_add->find(e);
            if (it != sparse_add->end()) c += it->second;
        }
        return c;
    }
};

// Exact Dijkstra over nonnegative effective costs. Predecessor ties resolve
// to the smallest node index. When max_dist is finite, nodes farther than it
// are left unreached (all nodes within max_dist are still exact).
DistanceField dijkstra(const RoutingGraph& graph, NodeId source,
                       const CostOverlay& overlay = {},
                       double max_dist = kInf);

// Multi-source variant: seed[v] = initial distance of v (kInf = not a
// source). origin[v] traces the winning source node.
struct MultiSourceField {
    std::vector<double> dist;
    std::vector<NodeId> pred;
    std::vector<NodeId> origin;
};

MultiSourceField multi_source_dijkstra(const RoutingGraph& graph,
                                       const std::vector<double>& seed,
                                       const CostOverlay& overlay = {},
                                       double max_dist = kInf);

struct AStarStats {
    std::int64_t expanded = 0;
};

// A* from start to goal. `heuristic` must be a distance field rooted at the
// goal whose values never overestimate remaining cost under `overlay`.
// Throws std::runtime_error("terminals disconnected") when no path exists.
std::vector<NodeId> astar(const RoutingGraph& graph, NodeId start, NodeId goal,
                          const DistanceField& heuristic,
                          const CostOverlay& overlay = {},
                          AStarStats* stats = nullptr);

// Sum of effective edge costs along a node path.
double path_cost(const RoutingGraph& graph, std::span<const NodeId> path,
                 const CostOverlay& overlay = {});
double path_geometric_length(const RoutingGraph& graph, std::span<const NodeId> path);

// Up to n_paths spatially distinct simple paths between the cable terminals,
// each within factor alpha of the shortest-path cost under `overlay`.
// The shortest path always comes first. Deterministic.
std::vector<std::vector<NodeId>> alpha_shortest_paths(const RoutingGraph& graph,
                                                      NodeId start, NodeId goal,
                                                      double alpha, int n_paths,
                                                      const CostOverlay& overlay = {});

// Memoizes base-cost distance fields rooted at goal nodes. Fields under
// uniformly scaled costs (w * c_e) are exact rescalings of the base field,
// so one field per goal serves every objective weight. Thread-safe.
class GoalFieldCache {
public:
    explicit GoalFieldCache(const RoutingGraph& graph) : graph_(&graph) {}

    std::shared_ptr<const DistanceField> field(NodeId goal);
    const RoutingGraph& graph() const { return *graph_; }

private:
    const RoutingGraph* graph_;
    std::mutex mutex_;
    std::map<NodeId, std::shared_ptr<const DistanceField>> fields_;
};

// Heuristic view of a cached base field scaled by a constant factor.
struct ScaledHeuristic {
    std::shared_ptr<const DistanceField> base;
    double scale = 1.0;
};

// A* variant taking the scaled heuristic view.
std::vector<NodeId> astar(const RoutingGraph& graph, NodeId start, NodeId goal,
                          const ScaledHeuristic& heuristic,
                          const CostOverlay& overlay = {},
                          AStarStats* stats = nullptr);

}  // namespace harness
