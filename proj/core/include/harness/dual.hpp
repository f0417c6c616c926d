#pragma once

#include <unordered_map>
#include <vector>

#include "harness/local_search.hpp"
#include "harness/model.hpp"
#include "harness/search.hpp"

namespace harness {

// Per-(edge, cable) multipliers stored as deviations from the uniform split
// bundle_weight * c_e / |K|. Only edges a subgradient step has touched are
// materialized; everything else stays at the uniform split, which is
// feasible by construction.
struct DualMultipliers {
    double uniform_scale = 0.0;  // bundle_weight / |K|
    std::vector<std::unordered_map<EdgeId, double>> deviation;  // per cable

    double value(const RoutingGraph& graph, EdgeId e, int cable) const {
        double v = graph.edge(e).cost * uniform_scale;
        const auto& dev = deviation[cable];
        auto it = dev.find(e);
        if (it != dev.end()) v += it->second;
        return v;
    }
    // Sum over cables; equals bundle_weight * c_e up to rounding.
    double edge_sum(const RoutingGraph& graph, EdgeId e) const;
};

// Uniform split multipliers, feasible for every per-edge budget set.
DualMultipliers initial_multipliers(const Instance& instance);

// Dual function value and the sparse subgradient: the minimizing per-cable
// shortest paths under w_L c_e + lambda_e^k.
struct SubgradientInfo {
    double h_value = 0.0;
    Routing routing;                           // per-cable minimizers
    std::vector<std::vector<EdgeId>> path_edges;  // nonzero subgradient entries
    std::int64_t norm_sq = 0;                  // number of (edge, cable) entries
};

SubgradientInfo evaluate_dual(const Instance& instance, const DualMultipliers& lambda,
                              GoalFieldCache& cache);

// Euclidean projection onto {v >= 0, sum v = budget} by sorted thresholding;
// the result sum is renormalized to the budget exactly.
std::vector<double> project_onto_budget_simplex(std::vector<double> values, double budget);

// Subgradient step length delta * (f_best - h) / ||xi||^2, floored at zero.
// Sets *weak_duality_violation when the primal bound lies below h.
double subgradient_step_length(double delta, double f_best, double h,
                               std::int64_t norm_sq,
                               bool* weak_duality_violation = nullptr);

struct SubgradientParams {
    int local_search_period = 25;   // run the local search every this many iterations
    int stagnation_window = 100;
    double stagnation_tol = 1e-4;
    double step_scale = 1.5;        // delta in (0, 2]
    double step_decay = 0.8;
    int decay_patience = 10;        // iterations without dual improvement
    int max_iterations = 10'000;
};

struct DualHistoryRecord {
    int iteration = 0;
    double h = 0.0;
    double h_best = 0.0;
    double f_best = 0.0;
    double gap = 0.0;
};

struct CandidateSolution {
    Routing routing;
    double f = 0.0;
};

struct DualSolveResult {
    Routing best_routing;
    double f_best = kInf;
    double h_best = -kInf;
    std::vector<CandidateSolution> candidates;  // distinct selected-edge sets
    std::vector<DualHistoryRecord> history;
    int weak_duality_violations = 0;
};

// Projected subgradient ascent on the dual with periodic local-search
// polishing of the subproblem routings. Deterministic.
DualSolveResult run_dual_solver(const Instance& instance,
                                const SubgradientParams& params = {},
                                GoalFieldCache* shared_cache = nullptr);

}  // namespace harness
