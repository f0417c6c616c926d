#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harness/model.hpp"

namespace harness {

inline constexpr int kSolutionSchemaVersion = 1;

struct TopologySummary {
    struct SegmentSummary {
        double length = 0.0;
        int multiplicity = 0;
    };
    std::vector<Vec3> branch_points;
    std::vector<SegmentSummary> segments;
};

// One exported solution: objective breakdown, bound when the solver proves
// one, the routing itself, and a topology digest.
struct SolutionRecord {
    double bundle_weight = 0.0;
    std::string algorithm;
    Routing routing;
    TopologySummary topology;
    double f = 0.0;
    double f_length = 0.0;
    double f_bundle = 0.0;
    std::optional<double> h_best;
    std::optional<double> gap;
    double wall_time_s = 0.0;
    int rank = 0;
};

// Rounds to 9 significant digits, the serialization precision.
double round_9sig(double value);

SolutionRecord make_record(const Instance& instance, const Routing& routing,
                           const std::string& algorithm, double wall_time_s, int rank,
                           std::optional<double> h_best = std::nullopt);

// Summary CSV: columns weight,algo,f,f_L,f_B,h,gap,time with 9-significant-
// digit floats; h and gap stay empty for solvers without bounds.
std::string records_csv(const std::vector<SolutionRecord>& records);

std::string record_json(const SolutionRecord& record);
SolutionRecord parse_record_json(const std::string& text);

// Writes solution_0000.json ... plus summary.csv into out_dir.
void export_records(const std::vector<SolutionRecord>& records, const std::string& out_dir);

SolutionRecord load_solution(const std::string& path);

// Recomputes the objectives from the routing and checks the stored values
// (f = w_L f_L + w_B f_B, h <= f). Throws on mismatch.
void revalidate_record(const Instance& instance, const SolutionRecord& record);

}  // namespace harness
