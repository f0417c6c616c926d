#include "harness/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace harness {

bool Instance::has_degenerate_cable() const {
    return std::any_of(cables.begin(), cables.end(),
                       [](const Cable& c) { return c.start == c.end; });
}

void Instance::validate() const {
    if (!graph) throw std::invalid_argument("instance has no graph");
    if (cables.empty()) throw std::invalid_argument("instance has no cables");
    if (!weights.valid()) throw std::invalid_argument("weights must be nonnegative and sum to 1");
    for (const Cable& c : cables) {
        if (c.start < 0 || c.start >= graph->num_nodes() || c.end < 0 ||
            c.end >= graph->num_nodes())
            throw std::invalid_argument("cable terminal outside graph");
    }
}

void validate_routing(const Instance& instance, const Routing& routing,
                      bool check_simple) {
    if (routing.paths.size() != instance.cables.size())
        throw std::runtime_error("routing infeasible");
    for (size_t k = 0; k < routing.paths.size(); ++k) {
        const Path& p = routing.paths[k];
        const Cable& c = instance.cables[k];
        if (p.empty() || p.front() != c.start || p.back() != c.end)
            throw std::runtime_error("routing infeasible");
        for (size_t i = 1; i < p.size(); ++i)
            if (instance.graph->edge_between(p[i - 1], p[i]) == kNoEdge)
                throw std::runtime_error("routing infeasible");
        if (check_simple) {
            std::set<NodeId> seen(p.begin(), p.end());
            if (seen.size() != p.size()) throw std::runtime_error("routing infeasible");
        }
    }
}

std::vector<EdgeId> path_edge_ids(const RoutingGraph& g, const Path& p) {
    std::vector<EdgeId> out;
    out.reserve(p.size() > 0 ? p.size() - 1 : 0);
    for (size_t i = 1; i < p.size(); ++i) {
        const EdgeId e = g.edge_between(p[i - 1], p[i]);
        if (e == kNoEdge) throw std::runtime_error("routing infeasible");
        out.push_back(e);
    }
    return out;
}

namespace {

void check_endpoints(const Instance& instance, const Routing& routing) {
    if (routing.paths.size() != instance.cables.size())
        throw std::runtime_error("routing infeasible");
    for (size_t k = 0; k < routing.paths.size(); ++k) {
        const Path& p = routing.paths[k];
        if (p.empty() || p.front() != instance.cables[k].start ||
            p.back() != instance.cables[k].end)
            throw std::runtime_error("routing infeasible");
    }
}

}  // namespace

double length_objective(const Instance& instance, const Routing& routing) {
    check_endpoints(instance, routing);
    double total = 0.0;
    for (const Path& p : routing.paths)
        for (EdgeId e : path_edge_ids(*instance.graph, p)) total += instance.graph->edge(e).cost;
    return total;
}

double bundling_objective(const Instance& instance, const Routing& routing) {
    check_endpoints(instance, routing);
    std::set<EdgeId> selected;
    for (const Path& p : routing.paths)
        for (EdgeId e : path_edge_ids(*instance.graph, p)) selected.insert(e);
    double total = 0.0;
    for (EdgeId e : selected) total += instance.graph->edge(e).cost;
    return total;
}

double weighted_objective(const Instance& instance, const Routing& routing) {
    return instance.weights.length_weight * length_objective(instance, routing) +
           instance.weights.bundle_weight * bundling_objective(instance, routing);
}

Topology derive_topology(const Instance& instance, const Routing& routing) {
    validate_routing(instance, routing);
    const RoutingGraph& g = *instance.graph;

    std::map<EdgeId, int> multiplicity;
    for (const Path& p : routing.paths)
        for (EdgeId e : path_edge_ids(g, p)) ++multiplicity[e];

    Topology topo;
    topo.selected_edges.reserve(multiplicity.size());
    topo.edge_multiplicity.reserve(multiplicity.size());
    for (const auto& [e, m] : multiplicity) {
        topo.selected_edges.push_back(e);
        topo.edge_multiplicity.push_back(m);
    }

    // Degree within the selected-edge subgraph.
    std::map<NodeId, std::vector<EdgeId>> incident;
    for (EdgeId e : topo.selected_edges) {
        incident[g.edge(e).u].push_back(e);
        incident[g.edge(e).v].push_back(e);
    }

    std::set<NodeId> terminals;
    for (const Cable& c : instance.cables) {
        terminals.insert(c.start);
        terminals.insert(c.end);
    }

    std::set<NodeId> joints;  // segment boundaries
    for (const auto& [node, edges] : incident) {
        const size_t deg = edges.size();
        const bool terminal = terminals.count(node) > 0;
        if (deg >= 3 || (terminal && deg >= 2)) topo.branch_points.push_back(node);
        if (deg >= 3 || terminal || deg == 1) joints.insert(node);
    }

    // Walk maximal chains between joints; interior nodes have degree 2.
    std::set<EdgeId> visited;
    auto other_end = [&](EdgeId e, NodeId from) {
        const GraphEdge& ed = g.edge(e);
        return ed.u == from ? ed.v : ed.u;
    };
    auto walk = [&](NodeId from, EdgeId first) {
        BundleSegment seg;
        seg.multiplicity = multiplicity[first];
        seg.nodes.push_back(from);
        NodeId cur = from;
        EdgeId e = first;
        while (true) {
            visited.insert(e);
            seg.cost += g.edge(e).cost;
            seg.length += g.edge(e).length;
            cur = other_end(e, cur);
            seg.nodes.push_back(cur);
            if (joints.count(cur) || cur == from) break;  // joint or closed loop
            const auto& inc = incident[cur];
            e = (inc[0] == e) ? inc[1] : inc[0];
        }
        return seg;
    };

    for (NodeId j : joints) {
        for (EdgeId e : incident[j]) {
            if (visited.count(e)) continue;
            topo.segments.push_back(walk(j, e));
        }
    }
    // Leftover edges belong to joint-free cycles; walk them as closed loops.
    for (EdgeId e : topo.selected_edges) {
        if (visited.count(e)) continue;
        topo.segments.push_back(walk(g.edge(e).u, e));
    }

    for (BundleSegment& s : topo.segments)
        if (s.nodes.back() < s.nodes.front()) std::reverse(s.nodes.begin(), s.nodes.end());
    std::sort(topo.segments.begin(), topo.segments.end(),
              [](const BundleSegment& a, const BundleSegment& b) { return a.nodes < b.nodes; });
    return topo;
}

std::vector<EdgeId> selected_edge_key(const Instance& instance, const Routing& routing) {
    std::vector<EdgeId> key;
    for (const Path& p : routing.paths) {
        const auto edges = path_edge_ids(*instance.graph, p);
        key.insert(key.end(), edges.begin(), edges.end());
    }
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    return key;
}

double duality_gap(double f_star, double h_star) {
    if (!(h_star > 0.0)) throw std::invalid_argument("bound not positive");
    return (f_star - h_star) / h_star;
}

}  // namespace harness
