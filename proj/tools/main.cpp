// Command line front end: scene validation, Pareto sweeps over bundle
// weights, and the scaling benchmark.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harness/bench.hpp"
#include "harness/parallel.hpp"
#include "harness/records.hpp"
#include "harness/scene.hpp"
#include "harness/sweep.hpp"

namespace {

std::vector<double> parse_weight_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

int cmd_validate(const std::string& scene_path) {
    try {
        const harness::LoadedScene scene = harness::load_scene(scene_path);
        std::printf("scene OK: %d nodes, %d edges, %zu cables, %zu weights\n",
                    scene.graph->num_nodes(), scene.graph->num_edges(),
                    scene.cables.size(), scene.scene.bundle_weights.size());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invalid scene: %s\n", e.what());
        return 1;
    }
}

int cmd_solve(const std::string& scene_path, const std::string& algo_name,
              const std::string& weights_csv, const std::string& out_dir,
              std::optional<std::uint64_t> seed, std::optional<int> threads) {
    try {
        const harness::LoadedScene scene = harness::load_scene(scene_path);
        const harness::Algorithm algo = harness::parse_algorithm(algo_name);

        std::vector<double> weights = weights_csv.empty()
                                          ? scene.scene.bundle_weights
                                          : parse_weight_list(weights_csv);
        harness::SweepOptions options;
        options.threads = threads.value_or(harness::default_thread_count());
        options.seed = seed.value_or(scene.scene.rng_seed);

        const harness::SweepResult result =
            harness::pareto_sweep(scene, weights, algo, options);

        for (const harness::SweepFailure& f : result.failures)
            std::fprintf(stderr, "weight %.6g failed: %s\n", f.bundle_weight,
                         f.message.c_str());
        for (const harness::SolutionRecord& r : result.records) {
            if (r.rank != 0) continue;
            std::printf("w_B=%-8.4g f=%-14.9g f_L=%-14.9g f_B=%-14.9g", r.bundle_weight,
                        r.f, r.f_length, r.f_bundle);
            if (r.h_best) std::printf(" h=%-14.9g", *r.h_best);
            if (r.gap) std::printf(" gap=%.4g", *r.gap);
            std::printf(" time=%.3gs\n", r.wall_time_s);
        }
        std::printf("%zu records across %zu weights\n", result.records.size(),
                    weights.size());
        if (!out_dir.empty()) {
            harness::export_records(result.records, out_dir);
            for (size_t i = 0; i < result.histories.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof(name), "history_%04zu.csv", i);
                std::ofstream h(std::filesystem::path(out_dir) / name);
                h << "# w_B = " << result.histories[i].bundle_weight << '\n'
                  << harness::dual_history_csv(result.histories[i].records);
            }
            std::printf("wrote %s\n",
                        (std::filesystem::path(out_dir) / "summary.csv").c_str());
        }
        return result.failures.empty() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solve failed: %s\n", e.what());
        return 1;
    }
}

int cmd_bench(const std::string& config_path, const std::string& out_dir,
              std::optional<int> threads) {
    try {
        harness::BenchConfig config = harness::load_bench_config(config_path);
        if (threads) config.threads = *threads;
        if (config.threads <= 0) config.threads = harness::default_thread_count();

        const harness::BenchResult result = harness::run_benchmark(config);
        std::fputs(harness::bench_csv(result.rows).c_str(), stdout);
        std::fputs(harness::slopes_csv(result.slopes).c_str(), stdout);
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            std::ofstream rows(std::filesystem::path(out_dir) / "bench.csv");
            rows << harness::bench_csv(result.rows);
            std::ofstream slopes(std::filesystem::path(out_dir) / "slopes.csv");
            slopes << harness::slopes_csv(result.slopes);
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "bench failed: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cable harness topology router"};
    app.require_subcommand(1);

    std::string scene_path, weights_csv, out_dir, algo_name = "shrh", config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    CLI::App* solve = app.add_subcommand("solve", "optimize a scene over bundle weights");
    solve->add_option("--scene", scene_path, "scene JSON file")->required();
    solve->add_option("--algo", algo_name, "shrh|asphrh|pso|exact");
    solve->add_option("--weights", weights_csv, "comma separated bundle weights");
    solve->add_option("--out", out_dir, "output directory for solutions + summary");
    solve->add_option("--seed", seed, "rng seed override");
    solve->add_option("--threads", threads, "worker threads (default: all cores)");

    CLI::App* bench = app.add_subcommand("bench", "run the scaling benchmark");
    bench->add_option("--config", config_path, "benchmark config JSON")->required();
    bench->add_option("--out", out_dir, "output directory for CSV files");
    bench->add_option("--threads", threads, "worker threads");

    CLI::App* validate = app.add_subcommand("validate", "check a scene file");
    validate->add_option("--scene", scene_path, "scene JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed())
        return cmd_solve(scene_path, algo_name, weights_csv, out_dir, seed, threads);
    if (bench->parsed()) return cmd_bench(config_path, out_dir, threads);
    if (validate->parsed()) return cmd_validate(scene_path);
    return 1;
}
