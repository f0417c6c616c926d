#include "harness/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "harness/parallel.hpp"

namespace harness {

Algorithm parse_algorithm(const std::string& name) {
    if (name == "shrh") return Algorithm::shrh;
    if (name == "asphrh") return Algorithm::asphrh;
    if (name == "pso") return Algorithm::pso;
    if (name == "exact") return Algorithm::exact;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm algo) {
    switch (algo) {
        case Algorithm::shrh: return "shrh";
        case Algorithm::asphrh: return "asphrh";
        case Algorithm::pso: return "pso";
        case Algorithm::exact: return "exact";
    }
    return "unknown";
}

std::string dual_history_csv(const std::vector<DualHistoryRecord>& records) {
    std::ostringstream out;
    out << "iteration,h,h_best,f_best,gap\n";
    char buf[128];
    for (const DualHistoryRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g\n", r.iteration, r.h,
                      r.h_best, r.f_best, r.gap);
        out << buf;
    }
    return out.str();
}

namespace {

struct WeightOutcome {
    std::vector<SolutionRecord> records;
    std::vector<DualHistoryRecord> history;
    std::string error;
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SweepResult pareto_sweep(const LoadedScene& scene, const std::vector<double>& weights,
                         Algorithm algorithm, const SweepOptions& options) {
    if (weights.empty()) throw std::invalid_argument("weights must be non-empty");
    for (double w : weights)
        if (w < 0.0 || w > 1.0)
            throw std::invalid_argument("bundle weight must lie in [0, 1]");

    const int n = static_cast<int>(weights.size());
    const int weight_workers = std::max(1, std::min(options.threads, n));
    const int inner_threads = std::max(1, options.threads / weight_workers);

    // Heuristic fields and alpha-path sets depend only on base costs, so
    // they are shared across every weight.
    GoalFieldCache cache(*scene.graph);
    AlphaPathSets alpha_sets;
    if (algorithm == Algorithm::asphrh) {
        Instance probe = scene.instance(weights.front());
        AlphaConstructParams params = scene.scene.alpha;
        alpha_sets = generate_alpha_sets(probe, params);
    }

    std::vector<WeightOutcome> outcomes(n);
    parallel_for(n, weight_workers, [&](int i) {
        WeightOutcome& out = outcomes[i];
        try {
            const Instance instance = scene.instance(weights[i]);
            const auto t0 = std::chrono::steady_clock::now();
            switch (algorithm) {
                case Algorithm::shrh: {
                    DualSolveResult r =
                        run_dual_solver(instance, scene.scene.subgradient, &cache);
                    const double elapsed = seconds_since(t0);
                    out.history = std::move(r.history);
                    // Best first, then remaining candidates by objective.
                    std::vector<CandidateSolution> sorted = r.candidates;
                    std::stable_sort(sorted.begin(), sorted.end(),
                                     [](const CandidateSolution& a, const CandidateSolution& b) {
                                         return a.f < b.f;
                                     });
                    for (size_t c = 0; c < sorted.size(); ++c)
                        out.records.push_back(make_record(instance, sorted[c].routing,
                                                          "shrh", elapsed,
                                                          static_cast<int>(c), r.h_best));
                    break;
                }
                case Algorithm::asphrh: {
                    AlphaConstructParams params = scene.scene.alpha;
                    params.sequence_seed = options.seed;
                    AlphaSolveResult r =
                        run_alpha_solver(instance, params, &cache, inner_threads, &alpha_sets);
                    const double elapsed = seconds_since(t0);
                    std::vector<CandidateSolution> sorted = r.candidates;
                    std::stable_sort(sorted.begin(), sorted.end(),
                                     [](const CandidateSolution& a, const CandidateSolution& b) {
                                         return a.f < b.f;
                                     });
                    for (size_t c = 0; c < sorted.size(); ++c)
                        out.records.push_back(make_record(instance, sorted[c].routing,
                                                          "asphrh", elapsed,
                                                          static_cast<int>(c)));
                    break;
                }
                case Algorithm::pso: {
                    PsoParams params = scene.scene.pso;
                    params.rng_seed = options.seed;
                    PsoResult r = run_pso(instance, params, inner_threads);
                    out.records.push_back(make_record(instance, r.best_routing, "pso",
                                                      seconds_since(t0), 0));
                    break;
                }
                case Algorithm::exact: {
                    ExactResult r = solve_exact(instance, scene.scene.exact, inner_threads);
                    if (r.proof == ExactProof::truncated)
                        out.error = "exact enumeration truncated";
                    out.records.push_back(make_record(instance, r.routing, "exact",
                                                      seconds_since(t0), 0));
                    break;
                }
            }
        } catch (const std::exception& e) {
            out.records.clear();
            out.error = e.what();
        }
    });

    SweepResult result;
    for (int i = 0; i < n; ++i) {
        if (!outcomes[i].error.empty())
            result.failures.push_back({weights[i], outcomes[i].error});
        if (!outcomes[i].history.empty())
            result.histories.push_back({weights[i], std::move(outcomes[i].history)});
        for (SolutionRecord& r : outcomes[i].records)
            result.records.push_back(std::move(r));
    }
    std::stable_sort(result.records.begin(), result.records.end(),
                     [](const SolutionRecord& a, const SolutionRecord& b) {
                         if (a.bundle_weight != b.bundle_weight)
                             return a.bundle_weight < b.bundle_weight;
                         return a.f < b.f;
                     });
    int rank = 0;
    double current_weight = -1.0;
    for (SolutionRecord& r : result.records) {
        if (r.bundle_weight != current_weight) {
            current_weight = r.bundle_weight;
            rank = 0;
        }
        r.rank = rank++;
    }
    return result;
}

}  // namespace harness
