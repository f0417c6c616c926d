#include "harness/pso.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>

#include "harness/parallel.hpp"

namespace harness {

int Particle::decoded_count(int max_points) const {
    const int n = static_cast<int>(std::floor(active_count + 0.5));
    return std::clamp(n, 0, max_points);
}

namespace {

// Closest full-grid point; kNoNode when that point was removed (collision).
NodeId closest_grid_node(const RoutingGraph& g, const Vec3& p) {
    const GridSpec& spec = g.spec();
    auto snap_axis = [](double w, double origin, double cell, int dim) {
        const int i = static_cast<int>(std::lround((w - origin) / cell));
        return std::clamp(i, 0, dim - 1);
    };
    const int ix = snap_axis(p.x, spec.origin.x, spec.cell_size.x, spec.nx);
    const int iy = snap_axis(p.y, spec.origin.y, spec.cell_size.y, spec.ny);
    const int iz = snap_axis(p.z, spec.origin.z, spec.cell_size.z, spec.nz);
    return g.node_at(ix, iy, iz);
}

}  // namespace

DecodeResult decode_particle(const Instance& instance, const Particle& particle) {
    const RoutingGraph& g = *instance.graph;
    const int max_points = 2 * instance.num_cables() - 2;
    const int active = particle.decoded_count(max_points);

    // Snap active junction points; collided or coinciding points drop out.
    std::vector<NodeId> junctions;
    std::set<NodeId> junction_set;
    for (int i = 0; i < active; ++i) {
        const NodeId n = closest_grid_node(g, particle.positions[i]);
        if (n == kNoNode) continue;
        if (junction_set.insert(n).second) junctions.push_back(n);
    }

    std::vector<NodeId> terminals;
    std::set<NodeId> terminal_set;
    for (const Cable& c : instance.cables) {
        if (terminal_set.insert(c.start).second) terminals.push_back(c.start);
        if (terminal_set.insert(c.end).second) terminals.push_back(c.end);
    }

    std::vector<NodeId> targets = junctions;
    for (NodeId t : terminals)
        if (!junction_set.count(t)) targets.push_back(t);

    DecodeResult out;
    if (targets.empty()) return out;

    // Grow the spanning tree by repeatedly attaching the closest
    // unconnected junction/terminal along its shortest path.
    std::set<NodeId> connected;
    std::vector<double> seed(g.num_nodes(), kInf);
    std::set<EdgeId> tree_edges;
    const NodeId root = junctions.empty() ? terminals.front() : junctions.front();
    connected.insert(root);
    seed[root] = 0.0;

    while (connected.size() < targets.size()) {
        const MultiSourceField field = multi_source_dijkstra(g, seed);
        NodeId pick = kNoNode;
        double best = kInf;
        for (NodeId t : targets) {
            if (connected.count(t)) continue;
            if (field.dist[t] < best) {
                best = field.dist[t];
                pick = t;
            }
        }
        if (pick == kNoNode) return out;  // disconnected: infinite fitness
        for (NodeId v = pick; field.pred[v] != kNoNode; v = field.pred[v]) {
            tree_edges.insert(g.edge_between(v, field.pred[v]));
            seed[v] = 0.0;
        }
        seed[pick] = 0.0;
        connected.insert(pick);
    }

    // Prune non-terminal leaves so junctions of tree degree < 3 vanish and
    // their dangling paths with them.
    std::map<NodeId, std::set<EdgeId>> incident;
    for (EdgeId e : tree_edges) {
        incident[g.edge(e).u].insert(e);
        incident[g.edge(e).v].insert(e);
    }
    std::queue<NodeId> leaves;
    for (const auto& [node, edges] : incident)
        if (edges.size() == 1 && !terminal_set.count(node)) leaves.push(node);
    while (!leaves.empty()) {
        const NodeId leaf = leaves.front();
        leaves.pop();
        auto it = incident.find(leaf);
        if (it == incident.end() || it->second.size() != 1) continue;
        const EdgeId e = *it->second.begin();
        const GraphEdge& ed = g.edge(e);
        const NodeId other = ed.u == leaf ? ed.v : ed.u;
        incident.erase(it);
        incident[other].erase(e);
        if (incident[other].size() == 1 && !terminal_set.count(other)) leaves.push(other);
    }

    // Each cable's route is the unique remaining tree path between its
    // terminals (BFS with sorted adjacency for determinism).
    std::map<NodeId, std::vector<NodeId>> adj;
    for (const auto& [node, edges] : incident)
        for (EdgeId e : edges) {
            const GraphEdge& ed = g.edge(e);
            adj[node].push_back(ed.u == node ? ed.v : ed.u);
        }
    for (auto& [node, list] : adj) std::sort(list.begin(), list.end());

    auto tree_path = [&](NodeId from, NodeId to) -> Path {
        if (from == to) return {from};
        std::map<NodeId, NodeId> parent;
        std::queue<NodeId> q;
        q.push(from);
        parent[from] = from;
        while (!q.empty()) {
            const NodeId u = q.front();
            q.pop();
            if (u == to) break;
            for (NodeId v : adj[u]) {
                if (parent.count(v)) continue;
                parent[v] = u;
                q.push(v);
            }
        }
        if (!parent.count(to)) return {};
        Path p;
        for (NodeId v = to; v != from; v = parent[v]) p.push_back(v);
        p.push_back(from);
        std::reverse(p.begin(), p.end());
        return p;
    };

    Routing routing;
    for (const Cable& c : instance.cables) {
        Path p = tree_path(c.start, c.end);
        if (p.empty()) return out;
        routing.paths.push_back(std::move(p));
    }
    out.routing = std::move(routing);
    out.fitness = weighted_objective(instance, out.routing);
    out.feasible = true;
    return out;
}

PsoResult run_pso(const Instance& instance, const PsoParams& params, int threads) {
    instance.validate();
    if (params.swarm_size < 1 || params.iterations < 0)
        throw std::invalid_argument("swarm size must be positive");
    const RoutingGraph& g = *instance.graph;
    const int max_points = 2 * instance.num_cables() - 2;

    Vec3 lo = g.node(0).pos, hi = g.node(0).pos;
    for (const GraphNode& n : g.nodes()) {
        lo.x = std::min(lo.x, n.pos.x);
        lo.y = std::min(lo.y, n.pos.y);
        lo.z = std::min(lo.z, n.pos.z);
        hi.x = std::max(hi.x, n.pos.x);
        hi.y = std::max(hi.y, n.pos.y);
        hi.z = std::max(hi.z, n.pos.z);
    }
    const Vec3 extent = hi - lo;
    const Vec3 vmax = extent * params.velocity_clamp;
    const double count_vmax = params.velocity_clamp * std::max(1.0, double(max_points));

    std::mt19937_64 rng(params.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform_in = [&](double a, double b) { return a + (b - a) * unit(rng); };

    std::vector<Particle> swarm(params.swarm_size);
    for (Particle& p : swarm) {
        p.active_count = uniform_in(0.0, double(max_points));
        p.positions.resize(max_points);
        p.velocities.assign(max_points, Vec3{});
        for (Vec3& pos : p.positions)
            pos = {uniform_in(lo.x, hi.x), uniform_in(lo.y, hi.y), uniform_in(lo.z, hi.z)};
    }

    std::vector<DecodeResult> decoded(swarm.size());
    auto evaluate_all = [&]() {
        parallel_for(static_cast<int>(swarm.size()), threads,
                     [&](int i) { decoded[i] = decode_particle(instance, swarm[i]); });
    };

    evaluate_all();
    std::vector<Particle> pbest = swarm;
    std::vector<double> pbest_f(swarm.size());
    for (size_t i = 0; i < swarm.size(); ++i) pbest_f[i] = decoded[i].fitness;

    PsoResult result;
    Particle gbest_particle = swarm[0];
    for (size_t i = 0; i < swarm.size(); ++i) {
        if (decoded[i].fitness < result.f_best) {
            result.f_best = decoded[i].fitness;
            result.best_routing = decoded[i].routing;
            gbest_particle = swarm[i];
        }
    }
    result.history.push_back(result.f_best);

    for (int iter = 0; iter < params.iterations; ++iter) {
        const double w =
            params.inertia_end >= 0.0 && params.iterations > 1
                ? params.inertia + (params.inertia_end - params.inertia) *
                                       (double(iter) / double(params.iterations - 1))
                : params.inertia;

        for (size_t i = 0; i < swarm.size(); ++i) {
            Particle& p = swarm[i];
            auto step = [&](double x, double v, double pb, double gb, double clamp,
                            double mn, double mx, double& x_out, double& v_out) {
                const double r1 = unit(rng), r2 = unit(rng);
                double nv = w * v + params.cognitive * r1 * (pb - x) +
                            params.social * r2 * (gb - x);
                nv = std::clamp(nv, -clamp, clamp);
                x_out = std::clamp(x + nv, mn, mx);
                v_out = nv;
            };
            step(p.active_count, p.count_velocity, pbest[i].active_count,
                 gbest_particle.active_count, count_vmax, 0.0, double(max_points),
                 p.active_count, p.count_velocity);
            for (int j = 0; j < max_points; ++j) {
                step(p.positions[j].x, p.velocities[j].x, pbest[i].positions[j].x,
                     gbest_particle.positions[j].x, std::max(vmax.x, 1e-12), lo.x, hi.x,
                     p.positions[j].x, p.velocities[j].x);
                step(p.positions[j].y, p.velocities[j].y, pbest[i].positions[j].y,
                     gbest_particle.positions[j].y, std::max(vmax.y, 1e-12), lo.y, hi.y,
                     p.positions[j].y, p.velocities[j].y);
                step(p.positions[j].z, p.velocities[j].z, pbest[i].positions[j].z,
                     gbest_particle.positions[j].z, std::max(vmax.z, 1e-12), lo.z, hi.z,
                     p.positions[j].z, p.velocities[j].z);
            }
        }

        evaluate_all();
        for (size_t i = 0; i < swarm.size(); ++i) {
            if (decoded[i].fitness < pbest_f[i]) {
                pbest_f[i] = decoded[i].fitness;
                pbest[i] = swarm[i];
            }
            if (decoded[i].fitness < result.f_best) {
                result.f_best = decoded[i].fitness;
                result.best_routing = decoded[i].routing;
                gbest_particle = swarm[i];
            }
        }
        result.history.push_back(result.f_best);
    }

    if (!(result.f_best < kInf)) throw std::runtime_error("no feasible particle found");
    return result;
}

}  // namespace harness
