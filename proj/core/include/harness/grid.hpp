#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harness/geometry.hpp"

namespace harness {

using NodeId = int32_t;
using EdgeId = int32_t;
inline constexpr NodeId kNoNode = -1;
inline constexpr EdgeId kNoEdge = -1;

// Cartesian grid of nodes; dims counts nodes per axis, cell_size is the
// node spacing (may differ per axis).
struct GridSpec {
    Vec3 origin;
    Vec3 cell_size{1.0, 1.0, 1.0};
    int nx = 1, ny = 1, nz = 1;

    bool valid() const {
        return nx >= 1 && ny >= 1 && nz >= 1 && cell_size.x > 0.0 &&
               cell_size.y > 0.0 && cell_size.z > 0.0;
    }
    std::int64_t node_count() const {
        return static_cast<std::int64_t>(nx) * ny * nz;
    }
    // Linearized index, x fastest, then y, then z. All tie-breaking in the
    // library uses this order.
    std::int64_t linear_index(int ix, int iy, int iz) const {
        return ix + static_cast<std::int64_t>(nx) * (iy + static_cast<std::int64_t>(ny) * iz);
    }
    Vec3 position(int ix, int iy, int iz) const {
        return {origin.x + ix * cell_size.x, origin.y + iy * cell_size.y,
                origin.z + iz * cell_size.z};
    }
    Box bounds() const {
        return {origin, position(nx - 1, ny - 1, nz - 1)};
    }
};

struct Zone {
    enum class Kind { obstacle, cost_multiplier };
    Box box;
    Kind kind = Kind::obstacle;
    double multiplier = 1.0;  // used only for cost_multiplier zones
};

struct GraphNode {
    int ix = 0, iy = 0, iz = 0;
    Vec3 pos;
    double cost = 1.0;        // node preference weight, clamped >= 1e-6
    std::int64_t linear = 0;  // index in the full (pre-removal) grid
};

struct GraphEdge {
    NodeId u = kNoNode, v = kNoNode;
    double length = 0.0;  // Euclidean, meters
    double cost = 0.0;    // length * mean endpoint node cost
};

struct Adjacency {
    NodeId neighbor;
    EdgeId edge;
};

// Immutable voxel-grid routing graph. Nodes are grid points surviving
// obstacle removal; edges connect infinity-norm neighbors (26-adjacency)
// whose straight segment clears all obstacles.
class RoutingGraph {
public:
    RoutingGraph() = default;

    const GridSpec& spec() const { return spec_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const GraphNode& node(NodeId n) const { return nodes_[n]; }
    const GraphEdge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<GraphNode>& nodes() const { return nodes_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }

    std::span<const Adjacency> neighbors(NodeId n) const {
        return {adj_.data() + adj_offset_[n],
                static_cast<size_t>(adj_offset_[n + 1] - adj_offset_[n])};
    }

    // Compact node id for a grid position, or kNoNode if removed.
    NodeId node_at(int ix, int iy, int iz) const;
    EdgeId edge_between(NodeId u, NodeId v) const;

    // Edge cost recomputed from the defining formula:
    // Euclidean endpoint distance times mean endpoint node cost.
    double edge_cost(EdgeId e) const;

    friend RoutingGraph build_graph(const GridSpec& spec, const std::vector<Zone>& zones);
    friend RoutingGraph apply_terminal_direction_penalty(const RoutingGraph& graph,
                                                         const struct Terminal& terminal,
                                                         double cone_half_angle_deg,
                                                         double penalty);

private:
    GridSpec spec_;
    std::vector<GraphNode> nodes_;
    std::vector<GraphEdge> edges_;
    std::vector<int> adj_offset_;
    std::vector<Adjacency> adj_;
    std::vector<NodeId> linear_to_node_;

    void rebuild_adjacency();
};

struct Terminal {
    Vec3 world_point;
    NodeId node = kNoNode;
    std::optional<Vec3> direction;  // outward connector direction, unit
};

// Builds the routing graph: removes nodes inside obstacle zones and edges
// whose segment clips an obstacle box, applies cost_multiplier zones to
// node costs (base 1.0, multiplicative), derives edge costs.
// Throws std::runtime_error("environment fully blocked") when nothing survives.
RoutingGraph build_graph(const GridSpec& spec, const std::vector<Zone>& zones);

// Nearest surviving node by Euclidean distance; ties broken by smallest
// linearized grid index.
NodeId snap_terminal(const RoutingGraph& graph, const Vec3& point);

// Returns a copy with every edge behind the terminal scaled by `penalty`.
// An edge is behind when one of its endpoints v (other than the terminal's
// own node) satisfies dot(unit(p_v - p_terminal), direction) < -cos(half angle).
RoutingGraph apply_terminal_direction_penalty(const RoutingGraph& graph,
                                              const Terminal& terminal,
                                              double cone_half_angle_deg,
                                              double penalty);

}  // namespace harness
