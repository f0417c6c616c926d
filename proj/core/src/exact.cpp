#include "harness/exact.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <stdexcept>

#include "harness/parallel.hpp"
#include "harness/search.hpp"

namespace harness {

namespace {

struct EnumeratedPath {
    Path nodes;
    std::vector<EdgeId> edges;
    double cost = 0.0;  // base edge costs
};

// All simple start->goal paths with base cost within the cap, depth-first
// with distance-to-goal pruning. Sets `truncated` when the count limit hits.
std::vector<EnumeratedPath> enumerate_paths(const RoutingGraph& g, NodeId start,
                                            NodeId goal, double cap, int max_paths,
                                            bool& truncated) {
    const DistanceField to_goal = dijkstra(g, goal);
    if (to_goal.dist[start] == kInf) throw std::runtime_error("terminals disconnected");
    const double slack = cap + 1e-12 * std::max(1.0, cap);

    std::vector<EnumeratedPath> out;
    std::vector<char> visited(g.num_nodes(), 0);
    Path stack{start};
    std::vector<EdgeId> edge_stack;
    visited[start] = 1;

    std::function<void(NodeId, double)> dfs = [&](NodeId u, double cost) {
        if (static_cast<int>(out.size()) >= max_paths) {
            truncated = true;
            return;
        }
        if (u == goal) {
            out.push_back({stack, edge_stack, cost});
            return;
        }
        for (const Adjacency& a : g.neighbors(u)) {
            if (visited[a.neighbor]) continue;
            const double ncost = cost + g.edge(a.edge).cost;
            if (ncost + to_goal.dist[a.neighbor] > slack) continue;
            visited[a.neighbor] = 1;
            stack.push_back(a.neighbor);
            edge_stack.push_back(a.edge);
            dfs(a.neighbor, ncost);
            edge_stack.pop_back();
            stack.pop_back();
            visited[a.neighbor] = 0;
        }
    };
    dfs(start, 0.0);

    std::sort(out.begin(), out.end(), [](const EnumeratedPath& a, const EnumeratedPath& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.nodes < b.nodes;
    });
    return out;
}

struct ProductSearch {
    const Instance& instance;
    const std::vector<std::vector<EnumeratedPath>>& paths;
    const std::vector<double>& shortest_cost;  // per cable, base costs
    std::atomic<std::int64_t>& budget;

    double best_f = kInf;
    std::vector<int> best_choice;
    std::vector<int> choice;
    std::vector<int> edge_use;
    double length_sum = 0.0;
    double union_sum = 0.0;
    bool aborted = false;

    ProductSearch(const Instance& inst, const std::vector<std::vector<EnumeratedPath>>& p,
                  const std::vector<double>& sc, std::atomic<std::int64_t>& b)
        : instance(inst), paths(p), shortest_cost(sc), budget(b) {
        edge_use.assign(inst.graph->num_edges(), 0);
        choice.assign(p.size(), -1);
    }

    double remaining_bound(size_t k) const {
        double bound = 0.0;
        for (size_t j = k; j < paths.size(); ++j) bound += shortest_cost[j];
        return instance.weights.length_weight * bound;
    }

    void search(size_t k) {
        if (aborted) return;
        if (budget.fetch_sub(1) <= 0) {
            aborted = true;
            return;
        }
        if (k == paths.size()) {
            const double f = instance.weights.length_weight * length_sum +
                             instance.weights.bundle_weight * union_sum;
            if (f < best_f) {
                best_f = f;
                best_choice = choice;
            }
            return;
        }
        const double tail = remaining_bound(k + 1);
        for (size_t i = 0; i < paths[k].size(); ++i) {
            const EnumeratedPath& p = paths[k][i];
            // Paths are cost-sorted: once even a zero union addition cannot
            // beat the incumbent, no later path can either.
            const double optimistic =
                instance.weights.length_weight * (length_sum + p.cost) +
                instance.weights.bundle_weight * union_sum + tail;
            if (optimistic >= best_f) break;
            double added_union = 0.0;
            for (EdgeId e : p.edges)
                if (edge_use[e] == 0) added_union += instance.graph->edge(e).cost;
            const double partial =
                instance.weights.length_weight * (length_sum + p.cost) +
                instance.weights.bundle_weight * (union_sum + added_union);
            if (partial + tail >= best_f) continue;
            for (EdgeId e : p.edges) ++edge_use[e];
            length_sum += p.cost;
            union_sum += added_union;
            choice[k] = static_cast<int>(i);
            search(k + 1);
            choice[k] = -1;
            union_sum -= added_union;
            length_sum -= p.cost;
            for (EdgeId e : p.edges) --edge_use[e];
            if (aborted) return;
        }
    }
};

}  // namespace

ExactResult solve_exact(const Instance& instance, const ExactLimits& limits, int threads) {
    instance.validate();
    const RoutingGraph& g = *instance.graph;

    bool truncated = false;
    std::vector<std::vector<EnumeratedPath>> paths;
    std::vector<double> shortest_cost;
    for (const Cable& c : instance.cables) {
        if (c.start == c.end) {
            paths.push_back({{Path{c.start}, {}, 0.0}});
            shortest_cost.push_back(0.0);
            continue;
        }
        const DistanceField f = dijkstra(g, c.end);
        const double base = f.dist[c.start];
        if (base == kInf) throw std::runtime_error("terminals disconnected");
        paths.push_back(enumerate_paths(g, c.start, c.end, limits.cost_cap_ratio * base,
                                        limits.max_paths_per_cable, truncated));
        shortest_cost.push_back(base);
    }

    std::atomic<std::int64_t> budget{limits.max_product};

    // Partition the first cable's path list across workers; each explores a
    // disjoint slice, then results merge deterministically.
    const int n_first = static_cast<int>(paths[0].size());
    const int workers = std::max(1, std::min(threads, n_first));
    std::vector<double> worker_best(workers, kInf);
    std::vector<std::vector<int>> worker_choice(workers);
    std::vector<char> worker_aborted(workers, 0);

    parallel_for(workers, workers, [&](int w) {
        ProductSearch ps(instance, paths, shortest_cost, budget);
        for (int i = w; i < n_first; i += workers) {
            const EnumeratedPath& p = paths[0][i];
            for (EdgeId e : p.edges) ++ps.edge_use[e];
            double added_union = 0.0;
            for (EdgeId e : p.edges)
                if (ps.edge_use[e] == 1) added_union += g.edge(e).cost;
            ps.length_sum = p.cost;
            ps.union_sum = added_union;
            ps.choice[0] = i;
            ps.search(1);
            ps.choice[0] = -1;
            ps.length_sum = 0.0;
            ps.union_sum = 0.0;
            for (EdgeId e : p.edges) --ps.edge_use[e];
            if (ps.aborted) break;
        }
        worker_best[w] = ps.best_f;
        worker_choice[w] = ps.best_choice;
        worker_aborted[w] = ps.aborted ? 1 : 0;
    });

    int best_worker = -1;
    for (int w = 0; w < workers; ++w) {
        if (worker_aborted[w]) truncated = true;
        if (worker_choice[w].empty()) continue;
        if (best_worker < 0 || worker_best[w] < worker_best[best_worker] ||
            (worker_best[w] == worker_best[best_worker] &&
             worker_choice[w] < worker_choice[best_worker]))
            best_worker = w;
    }
    if (best_worker < 0) throw std::runtime_error("exact search found no solution");

    ExactResult result;
    result.f_opt = worker_best[best_worker];
    result.proof = truncated ? ExactProof::truncated : ExactProof::complete;
    for (size_t k = 0; k < paths.size(); ++k)
        result.routing.paths.push_back(paths[k][worker_choice[best_worker][k]].nodes);
    return result;
}

bool verify_lower_bound(double h_value, double f_opt) {
    return h_value <= f_opt + 1e-9;
}

}  // namespace harness
