#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "harness/model.hpp"
#include "harness/search.hpp"

// Shared machinery for branch-point relocation: decomposing a routing into
// its bundle segments, planning relocations via distance-field sums, and
// rebuilding cable paths after segments are replaced.
namespace harness::detail {

struct CableSegmentRef {
    int segment = -1;
    bool forward = true;  // cable walks the stored node order
};

struct Decomposition {
    Topology topo;
    std::vector<std::vector<CableSegmentRef>> cable_segments;
    std::set<NodeId> terminals;
    std::map<NodeId, std::vector<int>> segments_at;  // joint -> incident segment ids

    // Branch points eligible for relocation (not pinned by a terminal).
    std::vector<NodeId> movable_branch_points() const;
};

Decomposition decompose(const Instance& instance, const Routing& routing);

// New node path for one segment, oriented like the stored segment nodes
// (front corresponds to the stored front endpoint's side).
struct SegmentReplacement {
    int segment = -1;
    Path new_path;
};

// Concatenates per-cable segment sequences with replacements applied and
// splices out any cycles the rerouting introduced.
Routing rebuild_with_replacements(const Routing& old_routing, const Decomposition& decomp,
                                  const std::vector<SegmentReplacement>& replacements);

struct RelocationPlan {
    NodeId target = kNoNode;          // new branch node (single move)
    NodeId target_second = kNoNode;   // second node for pair moves
    double surrogate = kInf;          // distance-field score of the plan
    std::vector<SegmentReplacement> replacements;
};

// Per-spoke data handed to placement filters.
struct SpokeView {
    int segment = -1;
    NodeId far_end = kNoNode;
    int multiplicity = 0;
    const DistanceField* field = nullptr;
};

// Geometric length of the field's predecessor path from its source to v.
double spoke_geometric_length(const RoutingGraph& graph, const DistanceField& field,
                              NodeId v);

using PlacementFilter =
    std::function<bool(NodeId candidate, const std::vector<SpokeView>& spokes)>;

// Best relocation of branch point `b` by minimizing the sum of spoke
// distance fields, each field run under (w_L * multiplicity + w_B) * c_e with
// the bundling term dropped on edges already selected elsewhere. Returns
// nothing when `b` cannot move (loops, pinned) or no admissible node beats
// the incumbent. `filter` restricts admissible nodes; `pinned` forces the
// target node instead of the argmin.
std::optional<RelocationPlan> plan_single_relocation(
    const Instance& instance, const Decomposition& decomp, NodeId b,
    const PlacementFilter& filter = nullptr, NodeId pinned = kNoNode);

// Joint relocation of both endpoints of bundle segment `segment_idx` via a
// multi-source sweep over the bundle cost model.
std::optional<RelocationPlan> plan_pair_relocation(const Instance& instance,
                                                   const Decomposition& decomp,
                                                   int segment_idx);

}  // namespace harness::detail
