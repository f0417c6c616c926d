#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "harness/scene.hpp"
#include "harness/sweep.hpp"

namespace harness {

// Scaling-experiment configuration. Cluster radius and separation are
// required inputs: synthetic instances put start terminals in one cluster
// and end terminals in another, a set distance apart.
struct BenchConfig {
    std::vector<std::string> algorithms = {"shrh", "asphrh"};
    std::vector<std::uint64_t> seeds = {1};
    int n_weights = 5;
    double weight_low = 0.1;
    double weight_high = 0.6;
    double cluster_radius = 0.0;      // required
    double cluster_separation = 0.0;  // required
    double cell_size = 1.0;

    std::vector<int> cable_counts;                  // cable-count series
    std::array<int, 3> cable_series_dims = {0, 0, 0};
    std::vector<std::array<int, 3>> grid_series_dims;  // node-count series
    int grid_series_cables = 10;

    int threads = 1;
};

BenchConfig parse_bench_config(const std::string& json_text);
BenchConfig load_bench_config(const std::string& path);

struct BenchRow {
    std::string series;  // "cables" or "nodes"
    int cables = 0;
    std::int64_t nodes = 0;
    int n_weights = 0;
    std::string algorithm;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

struct BenchSlope {
    std::string series;
    std::string algorithm;
    double slope = 0.0;  // log-log least squares
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::vector<BenchSlope> slopes;
};

// Synthetic clustered instance: start/end terminal clusters of the given
// radius, separated along the box's longest axis.
LoadedScene generate_clustered_scene(const std::array<int, 3>& dims, double cell_size,
                                     int cables, double cluster_radius,
                                     double cluster_separation, std::uint64_t seed);

BenchResult run_benchmark(const BenchConfig& config);

// CSV with columns K,V,n_weights,algo,seconds.
std::string bench_csv(const std::vector<BenchRow>& rows);
std::string slopes_csv(const std::vector<BenchSlope>& slopes);

}  // namespace harness
