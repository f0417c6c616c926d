#pragma once

// Test-only instance builders and independent oracles. The oracles here are
// deliberately naive (plain enumeration, no pruning or sharing with the
// library code paths they check).

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <memory>

#include "harness/grid.hpp"
#include "harness/model.hpp"
#include "harness/search.hpp"

namespace testsupport {

using namespace harness;

inline RoutingGraph make_grid(int nx, int ny, int nz,
                              const std::vector<Zone>& zones = {},
                              double cell = 1.0, Vec3 origin = {}) {
    GridSpec spec;
    spec.origin = origin;
    spec.cell_size = {cell, cell, cell};
    spec.nx = nx;
    spec.ny = ny;
    spec.nz = nz;
    return build_graph(spec, zones);
}

inline Zone obstacle(Vec3 lo, Vec3 hi) {
    Zone z;
    z.box = {lo, hi};
    z.kind = Zone::Kind::obstacle;
    return z;
}

inline Zone cost_zone(Vec3 lo, Vec3 hi, double multiplier) {
    Zone z;
    z.box = {lo, hi};
    z.kind = Zone::Kind::cost_multiplier;
    z.multiplier = multiplier;
    return z;
}

// Hub at (0,1), three leaves reachable through a shared 2-edge trunk.
// Paths along the trunk give f_L = 9, f_B = 5 at unit costs.
struct YFixture {
    RoutingGraph graph;
    Instance instance;
    Routing trunk_routing;

    explicit YFixture(double bundle_weight = 0.5) : graph(make_grid(4, 3, 1)) {
        auto node = [&](int x, int y) { return graph.node_at(x, y, 0); };
        instance.graph = &graph;
        instance.cables = {{node(0, 1), node(2, 0)},
                           {node(0, 1), node(3, 1)},
                           {node(0, 1), node(2, 2)}};
        instance.weights = Weights::from_bundle_weight(bundle_weight);
        trunk_routing.paths = {
            {node(0, 1), node(1, 1), node(2, 1), node(2, 0)},
            {node(0, 1), node(1, 1), node(2, 1), node(3, 1)},
            {node(0, 1), node(1, 1), node(2, 1), node(2, 2)},
        };
    }
};

// Every simple path between two nodes, by exhaustive depth-first walk.
// An optional cost cap prunes on the accumulated cost alone (no heuristic).
inline std::vector<Path> enumerate_all_simple_paths(const RoutingGraph& g, NodeId start,
                                                    NodeId goal,
                                                    size_t max_paths = 2'000'000,
                                                    double cost_cap = kInf) {
    std::vector<Path> out;
    std::vector<char> visited(g.num_nodes(), 0);
    Path stack{start};
    visited[start] = 1;
    auto dfs = [&](auto&& self, NodeId u, double cost) -> void {
        if (out.size() >= max_paths) return;
        if (u == goal) {
            out.push_back(stack);
            return;
        }
        for (const Adjacency& a : g.neighbors(u)) {
            if (visited[a.neighbor]) continue;
            const double ncost = cost + g.edge(a.edge).cost;
            if (ncost > cost_cap) continue;
            visited[a.neighbor] = 1;
            stack.push_back(a.neighbor);
            self(self, a.neighbor, ncost);
            stack.pop_back();
            visited[a.neighbor] = 0;
        }
    };
    dfs(dfs, start, 0.0);
    return out;
}

inline double base_path_cost(const RoutingGraph& g, const Path& p) {
    double total = 0.0;
    for (size_t i = 1; i < p.size(); ++i)
        total += g.edge(g.edge_between(p[i - 1], p[i])).cost;
    return total;
}

// Reference optimum: full cartesian product over explicit per-cable path
// lists, objective evaluated from scratch each time. No pruning.
struct BruteForceResult {
    Routing routing;
    double f = 0.0;
};

inline BruteForceResult brute_force_optimum(const Instance& instance,
                                            const std::vector<std::vector<Path>>& lists) {
    double product = 1.0;
    for (const auto& list : lists) product *= static_cast<double>(list.size());
    if (product > 4e7) throw std::runtime_error("brute force product too large for a test");

    BruteForceResult best;
    best.f = std::numeric_limits<double>::infinity();
    std::vector<size_t> idx(lists.size(), 0);
    for (;;) {
        Routing r;
        for (size_t k = 0; k < lists.size(); ++k) r.paths.push_back(lists[k][idx[k]]);
        const double f = weighted_objective(instance, r);
        if (f < best.f) {
            best.f = f;
            best.routing = r;
        }
        size_t k = 0;
        while (k < lists.size() && ++idx[k] == lists[k].size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == lists.size()) break;
    }
    return best;
}

// Exact despite the cap: any path costing more than a whole feasible
// routing (f >= (w_L + w_B) * c(P_k) = c(P_k)) cannot appear in an optimum.
inline BruteForceResult brute_force_optimum(const Instance& instance) {
    Routing shortest;
    for (const Cable& c : instance.cables) {
        if (c.start == c.end) {
            shortest.paths.push_back({c.start});
            continue;
        }
        const DistanceField f = dijkstra(*instance.graph, c.start);
        shortest.paths.push_back(f.path_to(c.end));
    }
    const double f_upper = weighted_objective(instance, shortest);
    const double cap = f_upper * (1.0 + 1e-9) + 1e-12;

    std::vector<std::vector<Path>> lists;
    for (const Cable& c : instance.cables) {
        if (c.start == c.end)
            lists.push_back({Path{c.start}});
        else
            lists.push_back(enumerate_all_simple_paths(*instance.graph, c.start, c.end,
                                                       2'000'000, cap));
    }
    return brute_force_optimum(instance, lists);
}

// Exact three-terminal tree value on the graph: one branch node serves any
// Steiner tree over three terminals. Enumeration over all branch nodes.
inline double steiner_value_single_branch(const RoutingGraph& g,
                                          const std::vector<NodeId>& terminals) {
    std::vector<std::vector<double>> fields;
    for (NodeId t : terminals) fields.push_back(dijkstra(g, t).dist);
    double best = kInf;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        double total = 0.0;
        for (const auto& f : fields) {
            if (f[v] == kInf) {
                total = kInf;
                break;
            }
            total += f[v];
        }
        best = std::min(best, total);
    }
    return best;
}

// Independent projection oracle: coarse-to-fine grid search over the scaled
// simplex {v >= 0, sum v = budget}. The objective is strictly convex, so
// refining around the incumbent cannot lose the minimum. Supports 2 or 3
// components.
inline std::vector<double> projection_grid_oracle(const std::vector<double>& x,
                                                  double budget) {
    const size_t n = x.size();
    auto dist_sq = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += (v[i] - x[i]) * (v[i] - x[i]);
        return s;
    };
    std::vector<double> center(n, budget / double(n));
    double radius = budget > 0.0 ? budget : 1.0;
    std::vector<double> best = center;
    double best_d = dist_sq(best);
    for (int round = 0; round < 6; ++round) {
        const double step = radius / 20.0;
        if (n == 2) {
            for (int i = -20; i <= 20; ++i) {
                const double a = center[0] + i * step;
                if (a < 0.0 || a > budget) continue;
                const std::vector<double> v{a, budget - a};
                if (v[1] < 0.0) continue;
                const double d = dist_sq(v);
                if (d < best_d) {
                    best_d = d;
                    best = v;
                }
            }
        } else {
            for (int i = -20; i <= 20; ++i) {
                for (int j = -20; j <= 20; ++j) {
                    const double a = center[0] + i * step;
                    const double b = center[1] + j * step;
                    if (a < 0.0 || b < 0.0 || a + b > budget) continue;
                    const std::vector<double> v{a, b, budget - a - b};
                    const double d = dist_sq(v);
                    if (d < best_d) {
                        best_d = d;
                        best = v;
                    }
                }
            }
        }
        center = best;
        radius = step * 2.0;
    }
    return best;
}

// Rule violations of a routing under minimum-length rules, recomputed from
// the derived topology (the authoritative check used by acceptance).
inline int count_rule_violations(const Instance& inst, const Routing& r,
                                 double min_terminal_branch, double min_branch_branch) {
    int violations = 0;
    const Topology topo = derive_topology(inst, r);
    std::set<NodeId> terminals;
    for (const Cable& c : inst.cables) {
        terminals.insert(c.start);
        terminals.insert(c.end);
    }
    for (const BundleSegment& s : topo.segments) {
        if (s.nodes.size() < 2) continue;
        const bool ft = terminals.count(s.nodes.front()) > 0;
        const bool bt = terminals.count(s.nodes.back()) > 0;
        double rule = 0.0;
        if (ft && bt)
            rule = 0.0;
        else if (ft || bt)
            rule = min_terminal_branch;
        else
            rule = min_branch_branch;
        if (s.length < rule) ++violations;
    }
    return violations;
}

// Geometric length of the predecessor path from the field source to v.
inline double oracle_spoke_length(const RoutingGraph& g, const DistanceField& f,
                                  NodeId v) {
    double len = 0.0;
    while (f.pred[v] != kNoNode) {
        len += g.edge(g.edge_between(v, f.pred[v])).length;
        v = f.pred[v];
    }
    return len;
}

// Exhaustive branch-placement feasibility for routings with one or two
// branch points: enumerates placements (and merges, for pairs) with
// shortest-path spokes and checks every applicable rule. Uniform cost
// fields keep base-shortest and cost-shortest spokes identical.
inline bool exhaustive_placement_feasible(const Instance& inst, const Routing& routing,
                                          double min_terminal_branch,
                                          double min_branch_branch) {
    const RoutingGraph& g = *inst.graph;
    const Topology topo = derive_topology(inst, routing);
    std::set<NodeId> terminals;
    for (const Cable& c : inst.cables) {
        terminals.insert(c.start);
        terminals.insert(c.end);
    }
    std::vector<NodeId> movable;
    for (NodeId b : topo.branch_points)
        if (!terminals.count(b)) movable.push_back(b);
    if (movable.empty())
        return count_rule_violations(inst, routing, min_terminal_branch,
                                     min_branch_branch) == 0;

    auto spoke_rule = [&](NodeId far) {
        return terminals.count(far) ? min_terminal_branch : min_branch_branch;
    };

    if (movable.size() == 1) {
        const NodeId b = movable[0];
        std::vector<NodeId> fars;
        for (const BundleSegment& s : topo.segments) {
            if (s.nodes.front() == b)
                fars.push_back(s.nodes.back());
            else if (s.nodes.back() == b)
                fars.push_back(s.nodes.front());
        }
        std::vector<DistanceField> fields;
        for (NodeId far : fars) fields.push_back(dijkstra(g, far));
        for (NodeId v = 0; v < g.num_nodes(); ++v) {
            bool ok = true;
            for (size_t j = 0; j < fars.size() && ok; ++j) {
                if (fars[j] == v) continue;  // spoke vanishes
                if (fields[j].dist[v] == kInf ||
                    oracle_spoke_length(g, fields[j], v) < spoke_rule(fars[j]))
                    ok = false;
            }
            if (ok) return true;
        }
        return false;
    }

    if (movable.size() == 2) {
        const NodeId b1 = movable[0], b2 = movable[1];
        auto fars_of = [&](NodeId b, NodeId other) {
            std::vector<NodeId> fars;
            for (const BundleSegment& s : topo.segments) {
                NodeId far = kNoNode;
                if (s.nodes.front() == b)
                    far = s.nodes.back();
                else if (s.nodes.back() == b)
                    far = s.nodes.front();
                if (far != kNoNode && far != other) fars.push_back(far);
            }
            return fars;
        };
        const std::vector<NodeId> fars1 = fars_of(b1, b2), fars2 = fars_of(b2, b1);
        std::vector<DistanceField> fields1, fields2;
        for (NodeId far : fars1) fields1.push_back(dijkstra(g, far));
        for (NodeId far : fars2) fields2.push_back(dijkstra(g, far));
        std::vector<DistanceField> all_to(g.num_nodes());
        for (NodeId v = 0; v < g.num_nodes(); ++v) all_to[v] = dijkstra(g, v);

        auto side_ok = [&](const std::vector<NodeId>& fars,
                           const std::vector<DistanceField>& fields, NodeId v) {
            for (size_t j = 0; j < fars.size(); ++j) {
                if (fars[j] == v) continue;
                if (fields[j].dist[v] == kInf ||
                    oracle_spoke_length(g, fields[j], v) < spoke_rule(fars[j]))
                    return false;
            }
            return true;
        };
        for (NodeId u = 0; u < g.num_nodes(); ++u) {
            if (!side_ok(fars1, fields1, u)) continue;
            for (NodeId v = 0; v < g.num_nodes(); ++v) {
                if (!side_ok(fars2, fields2, v)) continue;
                if (u == v) return true;  // merged pair, trunk vanishes
                if (all_to[u].dist[v] != kInf &&
                    oracle_spoke_length(g, all_to[u], v) >= min_branch_branch)
                    return true;
            }
        }
        return false;
    }
    return false;  // more branch points than the oracle enumerates
}

// Seeded tiny instances: grids up to 5x5x2, up to three cables, occasional
// zones. All terminals distinct and mutually reachable.
struct TinyInstance {
    std::shared_ptr<RoutingGraph> graph;
    std::vector<Cable> cables;

    Instance instance(double bundle_weight) const {
        Instance inst;
        inst.graph = graph.get();
        inst.cables = cables;
        inst.weights = Weights::from_bundle_weight(bundle_weight);
        return inst;
    }
};

inline std::vector<TinyInstance> tiny_suite(int count, std::uint64_t seed,
                                            double max_terminal_distance = 2.5) {
    std::vector<TinyInstance> out;
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    while (static_cast<int>(out.size()) < count) {
        const int nx = pick(3, 5), ny = pick(3, 5), nz = pick(1, 2);
        std::vector<Zone> zones;
        if (pick(0, 1) == 0)  // frequent obstacle cell
            zones.push_back(obstacle({double(pick(1, nx - 2)), double(pick(1, ny - 2)), 0.0},
                                     {double(pick(1, nx - 2)), double(pick(1, ny - 2)),
                                      double(nz - 1)}));
        if (pick(0, 2) == 0)  // occasional expensive region
            zones.push_back(cost_zone({0.0, 0.0, 0.0},
                                      {double(pick(1, nx - 1)), double(pick(1, ny - 1)),
                                       double(nz - 1)},
                                      1.0 + 0.5 * pick(1, 4)));
        RoutingGraph g;
        try {
            g = make_grid(nx, ny, nz, zones);
        } catch (const std::exception&) {
            continue;
        }
        const int cables = pick(1, 3);
        std::set<NodeId> used;
        std::vector<Cable> cable_list;
        bool ok = true;
        for (int k = 0; k < cables && ok; ++k) {
            NodeId a = kNoNode, b = kNoNode;
            for (int tries = 0; tries < 64; ++tries) {
                a = static_cast<NodeId>(rng() % g.num_nodes());
                b = static_cast<NodeId>(rng() % g.num_nodes());
                if (a == b || used.count(a) || used.count(b)) continue;
                // close terminal pairs keep exhaustive oracles cheap
                const double d = dijkstra(g, a).dist[b];
                if (d != kInf && d <= max_terminal_distance) break;
                a = kNoNode;
            }
            if (a == kNoNode) {
                ok = false;
                break;
            }
            used.insert(a);
            used.insert(b);
            cable_list.push_back({a, b});
        }
        if (!ok) continue;
        TinyInstance t;
        t.graph = std::make_shared<RoutingGraph>(std::move(g));
        t.cables = std::move(cable_list);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace testsupport
