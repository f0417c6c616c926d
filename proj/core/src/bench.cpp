#include "harness/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw std::runtime_error("bench config error at " + field + ": " + message);
}

}  // namespace

BenchConfig parse_bench_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("bench config parse error: ") + e.what());
    }
    BenchConfig c;
    if (!j.contains("schema_version") || j.at("schema_version") != 1)
        fail("schema_version", "missing or unsupported");
    if (!j.contains("cluster_radius")) fail("cluster_radius", "missing field");
    if (!j.contains("cluster_separation")) fail("cluster_separation", "missing field");
    c.cluster_radius = j.at("cluster_radius").get<double>();
    c.cluster_separation = j.at("cluster_separation").get<double>();
    if (!(c.cluster_radius > 0.0)) fail("cluster_radius", "must be positive");
    if (!(c.cluster_separation > 0.0)) fail("cluster_separation", "must be positive");

    if (j.contains("algorithms"))
        c.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("n_weights")) c.n_weights = j.at("n_weights").get<int>();
    if (j.contains("weight_low")) c.weight_low = j.at("weight_low").get<double>();
    if (j.contains("weight_high")) c.weight_high = j.at("weight_high").get<double>();
    if (j.contains("cell_size")) c.cell_size = j.at("cell_size").get<double>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();

    if (j.contains("cable_counts")) {
        c.cable_counts = j.at("cable_counts").get<std::vector<int>>();
        if (!j.contains("cable_series_dims")) fail("cable_series_dims", "missing field");
        const auto d = j.at("cable_series_dims").get<std::vector<int>>();
        if (d.size() != 3) fail("cable_series_dims", "expected [nx, ny, nz]");
        c.cable_series_dims = {d[0], d[1], d[2]};
    }
    if (j.contains("grid_series_dims")) {
        for (const auto& entry : j.at("grid_series_dims")) {
            const auto d = entry.get<std::vector<int>>();
            if (d.size() != 3) fail("grid_series_dims", "expected [nx, ny, nz] entries");
            c.grid_series_dims.push_back({d[0], d[1], d[2]});
        }
        if (j.contains("grid_series_cables"))
            c.grid_series_cables = j.at("grid_series_cables").get<int>();
    }
    return c;
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bench config: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_bench_config(buffer.str());
}

LoadedScene generate_clustered_scene(const std::array<int, 3>& dims, double cell_size,
                                     int cables, double cluster_radius,
                                     double cluster_separation, std::uint64_t seed) {
    Scene scene;
    scene.grid.origin = {0.0, 0.0, 0.0};
    scene.grid.cell_size = {cell_size, cell_size, cell_size};
    scene.grid.nx = dims[0];
    scene.grid.ny = dims[1];
    scene.grid.nz = dims[2];
    scene.rng_seed = seed;
    scene.bundle_weights = {0.5};

    const Box bounds = scene.grid.bounds();
    const Vec3 mid{(bounds.lo.x + bounds.hi.x) / 2, (bounds.lo.y + bounds.hi.y) / 2,
                   (bounds.lo.z + bounds.hi.z) / 2};
    const Vec3 start_center{mid.x - cluster_separation / 2, mid.y, mid.z};
    const Vec3 end_center{mid.x + cluster_separation / 2, mid.y, mid.z};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto jitter = [&](const Vec3& center) {
        for (;;) {
            const Vec3 offset{unit(rng), unit(rng), unit(rng)};
            if (offset.dot(offset) > 1.0) continue;
            Vec3 p = center + offset * cluster_radius;
            p.x = std::clamp(p.x, bounds.lo.x, bounds.hi.x);
            p.y = std::clamp(p.y, bounds.lo.y, bounds.hi.y);
            p.z = std::clamp(p.z, bounds.lo.z, bounds.hi.z);
            return p;
        }
    };
    for (int k = 0; k < cables; ++k)
        scene.cable_specs.push_back({jitter(start_center), jitter(end_center), {}, {}});

    LoadedScene out;
    auto graph = std::make_shared<RoutingGraph>(build_graph(scene.grid, scene.zones));
    for (const CableSpec& c : scene.cable_specs) {
        Terminal start{c.start, snap_terminal(*graph, c.start), {}};
        Terminal end{c.end, snap_terminal(*graph, c.end), {}};
        out.terminals.push_back(start);
        out.terminals.push_back(end);
        out.cables.push_back({start.node, end.node});
    }
    out.graph = std::move(graph);
    out.scene = std::move(scene);
    return out;
}

namespace {

std::vector<double> uniform_weights(int n, double low, double high) {
    std::vector<double> w;
    if (n == 1) {
        w.push_back((low + high) / 2);
        return w;
    }
    for (int i = 0; i < n; ++i)
        w.push_back(low + (high - low) * static_cast<double>(i) / (n - 1));
    return w;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    const size_t n = points.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& config) {
    BenchResult result;

    auto time_case = [&](const std::string& series, const std::array<int, 3>& dims,
                         int cables, std::uint64_t seed) {
        const LoadedScene scene = generate_clustered_scene(
            dims, config.cell_size, cables, config.cluster_radius,
            config.cluster_separation, seed);
        const std::vector<double> weights =
            uniform_weights(config.n_weights, config.weight_low, config.weight_high);
        for (const std::string& algo_name : config.algorithms) {
            const Algorithm algo = parse_algorithm(algo_name);
            SweepOptions options;
            options.threads = config.threads;
            options.seed = seed;
            const auto t0 = std::chrono::steady_clock::now();
            const SweepResult sweep = pareto_sweep(scene, weights, algo, options);
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (!sweep.failures.empty())
                throw std::runtime_error("benchmark sweep failed: " +
                                         sweep.failures.front().message);
            result.rows.push_back({series, cables, scene.graph->num_nodes(),
                                   config.n_weights, algo_name, seed, elapsed});
        }
    };

    for (int cables : config.cable_counts)
        for (std::uint64_t seed : config.seeds)
            time_case("cables", config.cable_series_dims, cables, seed);
    for (const auto& dims : config.grid_series_dims)
        for (std::uint64_t seed : config.seeds)
            time_case("nodes", dims, config.grid_series_cables, seed);

    // Log-log slope per (series, algorithm), averaging repeats per size.
    std::map<std::pair<std::string, std::string>,
             std::map<double, std::pair<double, int>>> buckets;
    for (const BenchRow& r : result.rows) {
        const double x = r.series == "cables" ? static_cast<double>(r.cables)
                                              : static_cast<double>(r.nodes);
        auto& cell = buckets[{r.series, r.algorithm}][x];
        cell.first += r.seconds;
        cell.second += 1;
    }
    for (const auto& [key, sizes] : buckets) {
        std::vector<std::pair<double, double>> points;
        for (const auto& [x, acc] : sizes) points.push_back({x, acc.first / acc.second});
        result.slopes.push_back({key.first, key.second, fit_loglog_slope(points)});
    }
    return result;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "K,V,n_weights,algo,seconds\n";
    for (const BenchRow& r : rows) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g", r.seconds);
        out << r.cables << ',' << r.nodes << ',' << r.n_weights << ',' << r.algorithm
            << ',' << buf << '\n';
    }
    return out.str();
}

std::string slopes_csv(const std::vector<BenchSlope>& slopes) {
    std::ostringstream out;
    out << "series,algo,slope\n";
    for (const BenchSlope& s : slopes) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g", s.slope);
        out << s.series << ',' << s.algorithm << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace harness
