#pragma once

#include <string>
#include <vector>

#include "harness/grid.hpp"

namespace harness {

// Objective weights; length_weight + bundle_weight must equal one.
struct Weights {
    double length_weight = 0.5;  // rewards short individual cables
    double bundle_weight = 0.5;  // rewards shared (bundled) edges

    static Weights from_bundle_weight(double wb) { return {1.0 - wb, wb}; }
    bool valid() const {
        return length_weight >= 0.0 && bundle_weight >= 0.0 &&
               std::abs(length_weight + bundle_weight - 1.0) <= 1e-12;
    }
};

struct Cable {
    NodeId start = kNoNode;
    NodeId end = kNoNode;
};

// One routing problem: a graph, terminal pairs, and objective weights.
// Degenerate cables (start == end) are permitted; they contribute nothing
// to either objective and are flagged on construction.
struct Instance {
    const RoutingGraph* graph = nullptr;
    std::vector<Cable> cables;
    Weights weights;

    int num_cables() const { return static_cast<int>(cables.size()); }
    bool has_degenerate_cable() const;
    void validate() const;  // throws std::invalid_argument on bad terminals
};

using Path = std::vector<NodeId>;

// One simple path per cable.
struct Routing {
    std::vector<Path> paths;

    bool operator==(const Routing& o) const { return paths == o.paths; }
};

// Throws std::runtime_error("routing infeasible") unless every path starts
// and ends at its cable's terminals, follows graph edges, and (when
// check_simple) repeats no node.
void validate_routing(const Instance& instance, const Routing& routing,
                      bool check_simple = true);

// Edge ids along a node path; throws "routing infeasible" on non-adjacent steps.
std::vector<EdgeId> path_edge_ids(const RoutingGraph& graph, const Path& path);

// Sum over cables of their path cost (shared edges count once per cable).
double length_objective(const Instance& instance, const Routing& routing);
// Cost of the union of all selected edges (each edge counts once).
double bundling_objective(const Instance& instance, const Routing& routing);
// length_weight * length_objective + bundle_weight * bundling_objective.
double weighted_objective(const Instance& instance, const Routing& routing);

struct BundleSegment {
    Path nodes;
    int multiplicity = 0;   // cables traversing the segment
    double cost = 0.0;      // sum of edge costs
    double length = 0.0;    // sum of Euclidean edge lengths
};

// Edge selection, branch points, and maximal bundle segments induced by a
// routing. Branch points are nodes of degree >= 3 in the selected-edge
// subgraph, plus terminals of degree >= 2.
struct Topology {
    std::vector<EdgeId> selected_edges;       // ascending edge id
    std::vector<int> edge_multiplicity;       // parallel to selected_edges
    std::vector<NodeId> branch_points;        // ascending node id
    std::vector<BundleSegment> segments;      // deterministic order
};

Topology derive_topology(const Instance& instance, const Routing& routing);

// Sorted, deduplicated ids of all edges a routing selects; the identity key
// for "topologically different" solutions.
std::vector<EdgeId> selected_edge_key(const Instance& instance, const Routing& routing);

// Relative duality gap (f_star - h_star) / h_star.
// Throws std::invalid_argument("bound not positive") when h_star <= 0.
double duality_gap(double f_star, double h_star);

}  // namespace harness
