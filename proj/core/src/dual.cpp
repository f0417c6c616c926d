#include "harness/dual.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace harness {

double DualMultipliers::edge_sum(const RoutingGraph& graph, EdgeId e) const {
    double total = 0.0;
    for (size_t k = 0; k < deviation.size(); ++k) total += value(graph, e, static_cast<int>(k));
    return total;
}

DualMultipliers initial_multipliers(const Instance& instance) {
    DualMultipliers m;
    m.uniform_scale = instance.weights.bundle_weight / instance.num_cables();
    m.deviation.resize(instance.num_cables());
    return m;
}

SubgradientInfo evaluate_dual(const Instance& instance, const DualMultipliers& lambda,
                              GoalFieldCache& cache) {
    const RoutingGraph& g = *instance.graph;
    const double w_length = instance.weights.length_weight;

    SubgradientInfo info;
    for (int k = 0; k < instance.num_cables(); ++k) {
        const Cable& c = instance.cables[k];
        if (c.start == c.end) {
            info.routing.paths.push_back({c.start});
            info.path_edges.emplace_back();
            continue;
        }
        CostOverlay overlay{w_length + lambda.uniform_scale, {}, {}, &lambda.deviation[k]};
        ScaledHeuristic h{cache.field(c.end), w_length};
        Path p = astar(g, c.start, c.end, h, overlay);
        info.h_value += path_cost(g, p, overlay);
        info.path_edges.push_back(path_edge_ids(g, p));
        info.norm_sq += static_cast<std::int64_t>(info.path_edges.back().size());
        info.routing.paths.push_back(std::move(p));
    }
    return info;
}

std::vector<double> project_onto_budget_simplex(std::vector<double> values, double budget) {
    if (budget < 0.0) throw std::invalid_argument("budget must be nonnegative");
    const size_t n = values.size();
    if (budget == 0.0) return std::vector<double>(n, 0.0);

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (size_t j = 0; j < n; ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - budget) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    double sum = 0.0;
    for (double& v : values) {
        v = std::max(0.0, v - theta);
        sum += v;
    }
    if (sum > 0.0) {
        const double correction = budget / sum;
        for (double& v : values) v *= correction;
    }
    return values;
}

double subgradient_step_length(double delta, double f_best, double h,
                               std::int64_t norm_sq, bool* weak_duality_violation) {
    if (norm_sq <= 0) throw std::invalid_argument("zero subgradient");
    const double bound_slack = f_best - h;
    if (weak_duality_violation)
        *weak_duality_violation = bound_slack < -1e-9 * std::max(1.0, std::abs(f_best));
    return std::max(0.0, delta * bound_slack / static_cast<double>(norm_sq));
}

namespace {

// One projected subgradient step over the edges the minimizer paths touch.
void apply_step(const Instance& instance, DualMultipliers& lambda,
                const SubgradientInfo& info, double eta) {
    const RoutingGraph& g = *instance.graph;
    const int k_count = instance.num_cables();
    const double w_bundle = instance.weights.bundle_weight;

    std::set<EdgeId> touched;
    for (const auto& edges : info.path_edges) touched.insert(edges.begin(), edges.end());

    std::vector<std::set<EdgeId>> on_path(k_count);
    for (int k = 0; k < k_count; ++k)
        on_path[k].insert(info.path_edges[k].begin(), info.path_edges[k].end());

    std::vector<double> values(k_count);
    for (EdgeId e : touched) {
        for (int k = 0; k < k_count; ++k) {
            values[k] = lambda.value(g, e, k);
            if (on_path[k].count(e)) values[k] += eta;
        }
        const double budget = w_bundle * g.edge(e).cost;
        const std::vector<double> projected = project_onto_budget_simplex(values, budget);
        const double uniform = g.edge(e).cost * lambda.uniform_scale;
        for (int k = 0; k < k_count; ++k) lambda.deviation[k][e] = projected[k] - uniform;
    }
}

}  // namespace

DualSolveResult run_dual_solver(const Instance& instance, const SubgradientParams& params,
                                GoalFieldCache* shared_cache) {
    instance.validate();
    if (params.local_search_period < 1 || params.stagnation_window < 1 ||
        params.decay_patience < 1 || params.max_iterations < 1)
        throw std::invalid_argument("subgradient counters must be positive");
    if (!(params.step_scale > 0.0 && params.step_scale <= 2.0))
        throw std::invalid_argument("step scale must lie in (0, 2]");
    LocalSearchContext ctx = shared_cache ? LocalSearchContext(*shared_cache)
                                          : LocalSearchContext(*instance.graph);

    DualSolveResult result;
    DualMultipliers lambda = initial_multipliers(instance);

    // Finite primal bound before the first polish: per-cable shortest paths
    // evaluated as a harness.
    Routing seed = shortest_path_routing(instance, ctx);
    result.best_routing = seed;
    result.f_best = weighted_objective(instance, seed);

    std::set<std::vector<EdgeId>> seen_edge_sets;
    auto archive = [&](const Routing& routing, double f) {
        if (seen_edge_sets.insert(selected_edge_key(instance, routing)).second)
            result.candidates.push_back({routing, f});
    };

    std::vector<double> h_history;
    double delta = params.step_scale;
    int no_improvement = 0;

    for (int i = 0; i < params.max_iterations; ++i) {
        const SubgradientInfo info = evaluate_dual(instance, lambda, *ctx.cache);
        h_history.push_back(info.h_value);

        if (info.h_value > result.h_best) {
            result.h_best = info.h_value;
            no_improvement = 0;
        } else {
            ++no_improvement;
        }
        if (no_improvement >= params.decay_patience) {
            delta *= params.step_decay;
            no_improvement = 0;
        }

        if (i % params.local_search_period == 0) {
            Routing polished = run_local_search(instance, info.routing, ctx);
            const double f = weighted_objective(instance, polished);
            archive(polished, f);
            if (f < result.f_best) {
                result.f_best = f;
                result.best_routing = polished;
            }
        }

        double gap = 0.0;
        if (result.h_best > 0.0)
            gap = duality_gap(result.f_best, result.h_best);
        else if (result.f_best != result.h_best)
            gap = kInf;
        result.history.push_back({i, info.h_value, result.h_best, result.f_best, gap});

        if (info.norm_sq == 0) break;  // every cable degenerate: dual optimum
        if (result.f_best - result.h_best <=
            1e-12 * std::max(1.0, std::abs(result.f_best)))
            break;  // bounds met: proven optimal
        if (i >= params.stagnation_window) {
            const double h_ref = h_history[i - params.stagnation_window];
            if (h_ref > 0.0 && (result.h_best - h_ref) / h_ref < params.stagnation_tol)
                break;
        }

        bool violation = false;
        const double eta = subgradient_step_length(delta, result.f_best, info.h_value,
                                                   info.norm_sq, &violation);
        if (violation) ++result.weak_duality_violations;
        if (eta > 0.0) apply_step(instance, lambda, info, eta);
    }
    return result;
}

}  // namespace harness
