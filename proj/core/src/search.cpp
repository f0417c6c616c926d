#include "harness/search.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>

namespace harness {

std::vector<NodeId> DistanceField::path_to(NodeId target) const {
    std::vector<NodeId> path;
    if (dist[target] == kInf) return path;
    for (NodeId v = target; v != kNoNode; v = pred[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

using HeapItem = std::pair<double, NodeId>;
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;

}  // namespace

DistanceField dijkstra(const RoutingGraph& graph, NodeId source,
                       const CostOverlay& overlay, double max_dist) {
    const int n = graph.num_nodes();
    DistanceField field;
    field.source = source;
    field.dist.assign(n, kInf);
    field.pred.assign(n, kNoNode);
    field.dist[source] = 0.0;

    MinHeap heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > field.dist[u]) continue;  // stale entry
        if (d > max_dist) break;
        for (const Adjacency& a : graph.neighbors(u)) {
            const double w = overlay.effective(graph, a.edge);
            assert(w >= 0.0 && "negative effective edge cost");
            const double nd = d + w;
            if (nd < field.dist[a.neighbor]) {
                field.dist[a.neighbor] = nd;
                field.pred[a.neighbor] = u;
                heap.push({nd, a.neighbor});
            } else if (nd == field.dist[a.neighbor] && u < field.pred[a.neighbor]) {
                field.pred[a.neighbor] = u;
            }
        }
    }
    return field;
}

MultiSourceField multi_source_dijkstra(const RoutingGraph& graph,
                                       const std::vector<double>& seed,
                                       const CostOverlay& overlay, double max_dist) {
    const int n = graph.num_nodes();
    MultiSourceField f;
    f.dist.assign(n, kInf);
    f.pred.assign(n, kNoNode);
    f.origin.assign(n, kNoNode);
    MinHeap heap;
    for (NodeId v = 0; v < n; ++v) {
        if (seed[v] == kInf) continue;
        f.dist[v] = seed[v];
        f.origin[v] = v;
        heap.push({seed[v], v});
    }
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > f.dist[u]) continue;
        if (d > max_dist) break;
        for (const Adjacency& a : graph.neighbors(u)) {
            const double nd = d + overlay.effective(graph, a.edge);
            if (nd < f.dist[a.neighbor]) {
                f.dist[a.neighbor] = nd;
                f.pred[a.neighbor] = u;
                f.origin[a.neighbor] = f.origin[u];
                heap.push({nd, a.neighbor});
            } else if (nd == f.dist[a.neighbor] && f.pred[a.neighbor] != kNoNode &&
                       u < f.pred[a.neighbor]) {
                f.pred[a.neighbor] = u;
                f.origin[a.neighbor] = f.origin[u];
            }
        }
    }
    return f;
}

namespace {

std::vector<NodeId> astar_impl(const RoutingGraph& graph, NodeId start, NodeId goal,
                               const std::vector<double>* hdist, double hscale,
                               const CostOverlay& overlay, AStarStats* stats) {
    const int n = graph.num_nodes();
    if (start == goal) return {start};

    auto h = [&](NodeId v) {
        if (!hdist) return 0.0;
        const double d = (*hdist)[v];
        return d == kInf ? kInf : d * hscale;
    };

    std::vector<double> g(n, kInf);
    std::vector<NodeId> parent(n, kNoNode);
    std::vector<char> closed(n, 0);
    g[start] = 0.0;

    // Key: (f, g, node) so equal-f ties resolve deterministically.
    using Item = std::tuple<double, double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    open.push({h(start), 0.0, start});

    while (!open.empty()) {
        auto [f, gu, u] = open.top();
        open.pop();
        if (closed[u] || gu > g[u]) continue;
        if (u == goal) {
            std::vector<NodeId> path;
            for (NodeId v = goal; v != kNoNode; v = parent[v]) path.push_back(v);
            std::reverse(path.begin(), path.end());
            return path;
        }
        closed[u] = 1;
        if (stats) ++stats->expanded;
        for (const Adjacency& a : graph.neighbors(u)) {
            const double w = overlay.effective(graph, a.edge);
            assert(!(h(u) > w + h(a.neighbor) + 1e-9) && "heuristic not consistent");
            const double ng = gu + w;
            if (ng < g[a.neighbor]) {
                g[a.neighbor] = ng;
                parent[a.neighbor] = u;
                closed[a.neighbor] = 0;  // reopen on improvement
                open.push({ng + h(a.neighbor), ng, a.neighbor});
            } else if (ng == g[a.neighbor] && !closed[a.neighbor] &&
                       u < parent[a.neighbor]) {
                parent[a.neighbor] = u;
            }
        }
    }
    throw std::runtime_error("terminals disconnected");
}

}  // namespace

std::vector<NodeId> astar(const RoutingGraph& graph, NodeId start, NodeId goal,
                          const DistanceField& heuristic, const CostOverlay& overlay,
                          AStarStats* stats) {
    return astar_impl(graph, start, goal, &heuristic.dist, 1.0, overlay, stats);
}

std::vector<NodeId> astar(const RoutingGraph& graph, NodeId start, NodeId goal,
                          const ScaledHeuristic& heuristic, const CostOverlay& overlay,
                          AStarStats* stats) {
    return astar_impl(graph, start, goal, heuristic.base ? &heuristic.base->dist : nullptr,
                      heuristic.scale, overlay, stats);
}

double path_cost(const RoutingGraph& graph, std::span<const NodeId> path,
                 const CostOverlay& overlay) {
    double total = 0.0;
    for (size_t i = 1; i < path.size(); ++i) {
        const EdgeId e = graph.edge_between(path[i - 1], path[i]);
        if (e == kNoEdge) throw std::runtime_error("routing infeasible");
        total += overlay.effective(graph, e);
    }
    return total;
}

double path_geometric_length(const RoutingGraph& graph, std::span<const NodeId> path) {
    double total = 0.0;
    for (size_t i = 1; i < path.size(); ++i) {
        const EdgeId e = graph.edge_between(path[i - 1], path[i]);
        if (e == kNoEdge) throw std::runtime_error("routing infeasible");
        total += graph.edge(e).length;
    }
    return total;
}

std::vector<std::vector<NodeId>> alpha_shortest_paths(const RoutingGraph& graph,
                                                      NodeId start, NodeId goal,
                                                      double alpha, int n_paths,
                                                      const CostOverlay& overlay) {
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
    if (n_paths < 1) throw std::invalid_argument("n_paths must be positive");

    // Diversification penalties: node factors feed the mean-of-endpoint-costs
    // formula, edge factors double every edge of a found path so that paths
    // without interior nodes (direct neighbors) also diversify.
    std::vector<double> node_penalty(graph.num_nodes(), 1.0);
    std::vector<double> edge_factor(graph.num_edges(), 1.0);
    std::vector<double> penalized(graph.num_edges());
    auto refresh = [&]() {
        for (EdgeId e = 0; e < graph.num_edges(); ++e) {
            const GraphEdge& ed = graph.edge(e);
            const double node_term =
                0.5 * (graph.node(ed.u).cost * node_penalty[ed.u] +
                       graph.node(ed.v).cost * node_penalty[ed.v]);
            penalized[e] = ed.length * node_term / std::max(ed.cost, 1e-300) * edge_factor[e];
            if (!overlay.edge_scale.empty()) penalized[e] *= overlay.edge_scale[e];
        }
    };

    auto penalize = [&](const std::vector<NodeId>& path) {
        for (size_t i = 1; i + 1 < path.size(); ++i) node_penalty[path[i]] *= 2.0;
        for (size_t i = 1; i < path.size(); ++i)
            edge_factor[graph.edge_between(path[i - 1], path[i])] *= 2.0;
    };

    std::vector<std::vector<NodeId>> accepted;

    DistanceField base = dijkstra(graph, start, overlay);
    if (base.dist[goal] == kInf) throw std::runtime_error("terminals disconnected");
    std::vector<NodeId> shortest = base.path_to(goal);
    const double limit = alpha * path_cost(graph, shortest, overlay);
    accepted.push_back(shortest);
    penalize(shortest);

    auto overlaps_some = [&](const std::vector<NodeId>& cand) {
        std::vector<char> in_cand(graph.num_nodes(), 0);
        for (NodeId v : cand) in_cand[v] = 1;
        for (const auto& acc : accepted) {
            int shared = 0;
            for (NodeId v : acc)
                if (in_cand[v]) ++shared;
            if (static_cast<double>(shared) / static_cast<double>(cand.size()) > 0.8)
                return true;
        }
        return false;
    };

    const int max_attempts = 5 * n_paths;
    for (int attempt = 0; attempt < max_attempts &&
                          static_cast<int>(accepted.size()) < n_paths;
         ++attempt) {
        refresh();
        CostOverlay pen = overlay;
        pen.edge_scale = penalized;  // relative factor applied on top of overlay
        DistanceField f = dijkstra(graph, start, pen);
        if (f.dist[goal] == kInf) break;
        std::vector<NodeId> cand = f.path_to(goal);
        const double true_cost = path_cost(graph, cand, overlay);
        const bool duplicate = std::any_of(accepted.begin(), accepted.end(),
                                           [&](const auto& p) { return p == cand; });
        if (!duplicate && true_cost <= limit && !overlaps_some(cand))
            accepted.push_back(cand);
        penalize(cand);
    }
    return accepted;
}

std::shared_ptr<const DistanceField> GoalFieldCache::field(NodeId goal) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = fields_.find(goal);
    if (it != fields_.end()) return it->second;
    auto f = std::make_shared<DistanceField>(dijkstra(*graph_, goal));
    fields_.emplace(goal, f);
    return f;
}

}  // namespace harness
