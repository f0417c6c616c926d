#include "harness/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace harness {

namespace {
constexpr double kMinNodeCost = 1e-6;  // keeps every edge cost strictly positive
}

NodeId RoutingGraph::node_at(int ix, int iy, int iz) const {
    if (ix < 0 || ix >= spec_.nx || iy < 0 || iy >= spec_.ny || iz < 0 || iz >= spec_.nz)
        return kNoNode;
    return linear_to_node_[spec_.linear_index(ix, iy, iz)];
}

EdgeId RoutingGraph::edge_between(NodeId u, NodeId v) const {
    for (const Adjacency& a : neighbors(u))
        if (a.neighbor == v) return a.edge;
    return kNoEdge;
}

double RoutingGraph::edge_cost(EdgeId e) const {
    const GraphEdge& ed = edges_[e];
    return distance(nodes_[ed.u].pos, nodes_[ed.v].pos) *
           0.5 * (nodes_[ed.u].cost + nodes_[ed.v].cost);
}

void RoutingGraph::rebuild_adjacency() {
    const int n = num_nodes();
    std::vector<int> degree(n, 0);
    for (const GraphEdge& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
    }
    adj_offset_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) adj_offset_[i + 1] = adj_offset_[i] + degree[i];
    adj_.assign(adj_offset_[n], Adjacency{});
    std::vector<int> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
        const GraphEdge& ed = edges_[e];
        adj_[cursor[ed.u]++] = {ed.v, e};
        adj_[cursor[ed.v]++] = {ed.u, e};
    }
}

RoutingGraph build_graph(const GridSpec& spec, const std::vector<Zone>& zones) {
    if (!spec.valid()) throw std::invalid_argument("invalid grid spec");

    RoutingGraph g;
    g.spec_ = spec;
    g.linear_to_node_.assign(spec.node_count(), kNoNode);

    std::vector<const Zone*> obstacles;
    std::vector<const Zone*> multipliers;
    for (const Zone& z : zones) {
        if (!z.box.valid()) throw std::invalid_argument("zone box min exceeds max");
        if (z.kind == Zone::Kind::obstacle) {
            obstacles.push_back(&z);
        } else {
            if (!(z.multiplier > 0.0))
                throw std::invalid_argument("cost_multiplier zone requires multiplier > 0");
            multipliers.push_back(&z);
        }
    }

    // Nodes in linear-index order; x fastest.
    for (int iz = 0; iz < spec.nz; ++iz) {
        for (int iy = 0; iy < spec.ny; ++iy) {
            for (int ix = 0; ix < spec.nx; ++ix) {
                const Vec3 p = spec.position(ix, iy, iz);
                bool blocked = false;
                for (const Zone* z : obstacles) {
                    if (z->box.contains(p)) {
                        blocked = true;
                        break;
                    }
                }
                if (blocked) continue;
                double cost = 1.0;
                for (const Zone* z : multipliers)
                    if (z->box.contains(p)) cost *= z->multiplier;
                cost = std::max(cost, kMinNodeCost);
                GraphNode node{ix, iy, iz, p, cost, spec.linear_index(ix, iy, iz)};
                g.linear_to_node_[node.linear] = static_cast<NodeId>(g.nodes_.size());
                g.nodes_.push_back(node);
            }
        }
    }
    if (g.nodes_.empty()) throw std::runtime_error("environment fully blocked");

    // Edges: infinity-norm neighbors; enumerate offsets in fixed order and
    // keep the direction towards the larger linear index so each undirected
    // edge appears once, in deterministic order.
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
        const GraphNode& nu = g.nodes_[u];
        for (int dz = -1; dz <= 1; ++dz) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    const std::int64_t dlin =
                        dx + static_cast<std::int64_t>(spec.nx) *
                                 (dy + static_cast<std::int64_t>(spec.ny) * dz);
                    if (dlin < 0) continue;  // handled from the other endpoint
                    const NodeId v = g.node_at(nu.ix + dx, nu.iy + dy, nu.iz + dz);
                    if (v == kNoNode) continue;
                    const GraphNode& nv = g.nodes_[v];
                    bool clipped = false;
                    for (const Zone* z : obstacles) {
                        if (z->box.intersects_segment(nu.pos, nv.pos)) {
                            clipped = true;
                            break;
                        }
                    }
                    if (clipped) continue;
                    GraphEdge e;
                    e.u = u;
                    e.v = v;
                    e.length = distance(nu.pos, nv.pos);
                    e.cost = e.length * 0.5 * (nu.cost + nv.cost);
                    g.edges_.push_back(e);
                }
            }
        }
    }
    g.rebuild_adjacency();
    return g;
}

NodeId snap_terminal(const RoutingGraph& graph, const Vec3& point) {
    if (graph.num_nodes() == 0) throw std::runtime_error("environment fully blocked");
    NodeId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId n = 0; n < graph.num_nodes(); ++n) {
        const double d = distance(graph.node(n).pos, point);
        // Nodes are enumerated in linear-index order, so strict improvement
        // realizes the smallest-linear-index tie rule.
        if (d < best_d) {
            best_d = d;
            best = n;
        }
    }
    return best;
}

RoutingGraph apply_terminal_direction_penalty(const RoutingGraph& graph,
                                              const Terminal& terminal,
                                              double cone_half_angle_deg,
                                              double penalty) {
    if (!terminal.direction.has_value())
        throw std::invalid_argument("terminal has no direction");
    if (penalty < 1.0) throw std::invalid_argument("penalty must be >= 1");

    const Vec3 dir = terminal.direction->normalized();
    const double threshold = -std::cos(cone_half_angle_deg * M_PI / 180.0);
    const Vec3 origin = graph.node(terminal.node).pos;

    auto behind = [&](NodeId v) {
        if (v == terminal.node) return false;
        const Vec3 rel = graph.node(v).pos - origin;
        const double n = rel.norm();
        if (n <= 0.0) return false;
        return rel.dot(dir) / n < threshold;
    };

    RoutingGraph out = graph;
    for (GraphEdge& e : out.edges_) {
        if (behind(e.u) || behind(e.v)) e.cost *= penalty;
    }
    return out;
}

}  // namespace harness
