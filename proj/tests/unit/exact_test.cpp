#include <doctest.h>

#include "harness/exact.hpp"
#include "support/builders.hpp"

using namespace harness;
using namespace testsupport;

TEST_CASE("single cable: the optimum is the shortest path") {
    const RoutingGraph g = make_grid(4, 3, 1, {cost_zone({0, 0, 0}, {1, 2, 0}, 3.0)});
    Instance inst;
    inst.graph = &g;
    inst.cables = {{g.node_at(0, 0, 0), g.node_at(3, 2, 0)}};
    inst.weights = Weights::from_bundle_weight(0.4);
    const ExactResult r = solve_exact(inst);
    REQUIRE(r.proof == ExactProof::complete);
    const double shortest = dijkstra(g, inst.cables[0].start).dist[inst.cables[0].end];
    // w_L + w_B = 1, so f equals the path cost itself
    CHECK(r.f_opt == doctest::Approx(shortest).epsilon(1e-9));
}

TEST_CASE("two crossing cables on a 3x3 grid match the naive product search") {
    const RoutingGraph g = make_grid(3, 3, 1);
    Instance inst;
    inst.graph = &g;
    inst.cables = {{g.node_at(0, 0, 0), g.node_at(2, 2, 0)},
                   {g.node_at(0, 2, 0), g.node_at(2, 0, 0)}};
    inst.weights = Weights::from_bundle_weight(0.5);

    // independent enumerator: every simple path, full product, no pruning
    const BruteForceResult naive = brute_force_optimum(inst);
    const ExactResult r = solve_exact(inst);
    REQUIRE(r.proof == ExactProof::complete);
    CHECK(r.f_opt == doctest::Approx(naive.f).epsilon(1e-9));
    CHECK(weighted_objective(inst, r.routing) == doctest::Approx(r.f_opt).epsilon(1e-12));
}

TEST_CASE("w_B = 0 reduces to the weighted shortest-path sum") {
    const auto suite = tiny_suite(4, 77);
    for (const auto& tiny : suite) {
        const Instance inst = tiny.instance(0.0);
        ExactLimits limits;
        limits.max_paths_per_cable = 60'000;
        const ExactResult r = solve_exact(inst, limits);
        REQUIRE(r.proof == ExactProof::complete);
        double sum = 0.0;
        for (const Cable& c : inst.cables)
            sum += dijkstra(*tiny.graph, c.start).dist[c.end];
        CHECK(r.f_opt ==
              doctest::Approx(inst.weights.length_weight * sum).epsilon(1e-9));
    }
}

TEST_CASE("verify_lower_bound") {
    CHECK(verify_lower_bound(5.0, 5.0));
    CHECK(verify_lower_bound(5.0, 5.0 + 1e-10));
    CHECK_FALSE(verify_lower_bound(6.0, 5.0));
}

TEST_CASE("cost cap safety: ratios 3 and 4 agree when both complete") {
    const auto suite = tiny_suite(6, 4096);
    int compared = 0;
    for (const auto& tiny : suite) {
        for (double wb : {0.25, 0.75}) {
            const Instance inst = tiny.instance(wb);
            ExactLimits a;
            a.cost_cap_ratio = 3.0;
            ExactLimits b;
            b.cost_cap_ratio = 4.0;
            b.max_paths_per_cable = 20'000;
            const ExactResult ra = solve_exact(inst, a);
            const ExactResult rb = solve_exact(inst, b);
            if (ra.proof != ExactProof::complete || rb.proof != ExactProof::complete)
                continue;
            CHECK(ra.f_opt == doctest::Approx(rb.f_opt).epsilon(1e-12));
            ++compared;
        }
    }
    CHECK(compared >= 4);
}

TEST_CASE("truncation keeps an incumbent and flags the proof") {
    YFixture y(0.5);
    ExactLimits limits;
    limits.max_paths_per_cable = 2;
    const ExactResult r = solve_exact(y.instance, limits);
    CHECK(r.proof == ExactProof::truncated);
    validate_routing(y.instance, r.routing);
    CHECK(weighted_objective(y.instance, r.routing) == doctest::Approx(r.f_opt));
}

TEST_CASE("parallel product search matches the serial result") {
    YFixture y(0.5);
    const ExactResult serial = solve_exact(y.instance, {}, 1);
    const ExactResult parallel = solve_exact(y.instance, {}, 4);
    CHECK(serial.f_opt == parallel.f_opt);
    CHECK(serial.routing == parallel.routing);
}

TEST_CASE("weighted-sum sweep: monotone objectives and concave optimum") {
    YFixture y(0.5);
    const std::vector<double> weights = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> f_opt, f_len, f_bun;
    for (double wb : weights) {
        YFixture yw(wb);
        const ExactResult r = solve_exact(yw.instance);
        REQUIRE(r.proof == ExactProof::complete);
        f_opt.push_back(r.f_opt);
        f_len.push_back(length_objective(yw.instance, r.routing));
        f_bun.push_back(bundling_objective(yw.instance, r.routing));
    }
    for (size_t i = 1; i < weights.size(); ++i) {
        CHECK(f_bun[i] <= f_bun[i - 1] + 1e-9);  // bundling improves with w_B
        CHECK(f_len[i] >= f_len[i - 1] - 1e-9);  // cable length concedes
    }
    // concavity of the optimal value along the weight sweep
    for (size_t i = 1; i + 1 < weights.size(); ++i) {
        const double t = (weights[i] - weights[i - 1]) / (weights[i + 1] - weights[i - 1]);
        const double chord = (1.0 - t) * f_opt[i - 1] + t * f_opt[i + 1];
        CHECK(f_opt[i] >= chord - 1e-9);
    }
}
