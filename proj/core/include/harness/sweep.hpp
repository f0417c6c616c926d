#pragma once

#include <string>
#include <vector>

#include "harness/records.hpp"
#include "harness/scene.hpp"

namespace harness {

enum class Algorithm { shrh, asphrh, pso, exact };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm algo);

struct SweepOptions {
    int threads = 1;
    std::uint64_t seed = 1;  // feeds the stochastic solver and sequence shuffles
};

struct SweepFailure {
    double bundle_weight = 0.0;
    std::string message;
};

struct DualHistory {
    double bundle_weight = 0.0;
    std::vector<DualHistoryRecord> records;
};

struct SweepResult {
    std::vector<SolutionRecord> records;  // sorted by (weight, f), ranked per weight
    std::vector<SweepFailure> failures;
    std::vector<DualHistory> histories;  // per-iteration dual traces (shrh only)
};

// CSV with columns iteration,h,h_best,f_best,gap per history record.
std::string dual_history_csv(const std::vector<DualHistoryRecord>& records);

// Runs the chosen solver once per bundle weight (weights run concurrently on
// the option's thread budget), aggregates every candidate solution, and
// ranks records per weight. Per-weight failures are recorded and the sweep
// continues.
SweepResult pareto_sweep(const LoadedScene& scene, const std::vector<double>& weights,
                         Algorithm algorithm, const SweepOptions& options = {});

}  // namespace harness
