#include <doctest.h>

#include <random>

#include "harness/dual.hpp"
#include "harness/exact.hpp"
#include "support/builders.hpp"

using namespace harness;
using namespace testsupport;

namespace {

// Independent projection oracle: coarse-to-fine grid search over the scaled
// simplex. The objective is strictly convex, so refining around the
// incumbent cannot lose the minimum.
std::vector<double> grid_search_projection(const std::vector<double>& x, double budget) {
    const size_t n = x.size();
    REQUIRE(n >= 2);
    REQUIRE(n <= 3);
    auto dist_sq = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += (v[i] - x[i]) * (v[i] - x[i]);
        return s;
    };
    std::vector<double> center(n, budget / double(n));
    double radius = budget > 0.0 ? budget : 1.0;
    std::vector<double> best = center;
    double best_d = dist_sq(best);
    for (int round = 0; round < 6; ++round) {
        const double step = radius / 20.0;
        if (n == 2) {
            for (int i = -20; i <= 20; ++i) {
                const double a = center[0] + i * step;
                if (a < 0.0 || a > budget) continue;
                const std::vector<double> v{a, budget - a};
                if (v[1] < 0.0) continue;
                const double d = dist_sq(v);
                if (d < best_d) {
                    best_d = d;
                    best = v;
                }
            }
        } else {
            for (int i = -20; i <= 20; ++i) {
                for (int j = -20; j <= 20; ++j) {
                    const double a = center[0] + i * step;
                    const double b = center[1] + j * step;
                    if (a < 0.0 || b < 0.0 || a + b > budget) continue;
                    const std::vector<double> v{a, b, budget - a - b};
                    const double d = dist_sq(v);
                    if (d < best_d) {
                        best_d = d;
                        best = v;
                    }
                }
            }
        }
        center = best;
        radius = step * 2.0;
    }
    return best;
}

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("initial multipliers split the bundle budget uniformly") {
    const RoutingGraph g = make_grid(2, 1, 1);
    Instance inst;
    inst.graph = &g;
    inst.cables = {{0, 1}, {1, 0}};
    inst.weights = Weights::from_bundle_weight(0.5);
    const DualMultipliers m = initial_multipliers(inst);
    CHECK(m.value(g, 0, 0) == doctest::Approx(0.25));
    CHECK(m.value(g, 0, 1) == doctest::Approx(0.25));
    CHECK(m.edge_sum(g, 0) ==
          doctest::Approx(inst.weights.bundle_weight * g.edge(0).cost).epsilon(1e-12));

    SUBCASE("w_B = 0 gives all zeros") {
        inst.weights = Weights::from_bundle_weight(0.0);
        const DualMultipliers z = initial_multipliers(inst);
        CHECK(z.value(g, 0, 0) == 0.0);
        CHECK(z.value(g, 0, 1) == 0.0);
    }
}

TEST_CASE("initial multipliers are feasible on random instances") {
    const auto suite = tiny_suite(5, 404);
    for (const auto& tiny : suite) {
        const Instance inst = tiny.instance(0.7);
        const DualMultipliers m = initial_multipliers(inst);
        for (EdgeId e = 0; e < tiny.graph->num_edges(); ++e) {
            const double want = inst.weights.bundle_weight * tiny.graph->edge(e).cost;
            CHECK(m.edge_sum(*tiny.graph, e) == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("simplex projection: examples") {
    SUBCASE("feasible input is unchanged") {
        const auto out = project_onto_budget_simplex({0.3, 0.7}, 1.0);
        CHECK(out[0] == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(out[1] == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("(2, 0) onto budget 1 clips to (1, 0)") {
        const auto out = project_onto_budget_simplex({2.0, 0.0}, 1.0);
        CHECK(out[0] == doctest::Approx(1.0));
        CHECK(out[1] == doctest::Approx(0.0));
    }
    SUBCASE("budget 0 gives all zeros") {
        const auto out = project_onto_budget_simplex({0.4, 0.6, 1.0}, 0.0);
        for (double v : out) CHECK(v == 0.0);
    }
    SUBCASE("negative budget is rejected") {
        CHECK_THROWS_AS(project_onto_budget_simplex({1.0}, -0.1), std::invalid_argument);
    }
}

TEST_CASE("simplex projection: feasibility, idempotence, grid-search proximity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-1.0, 2.0);
    std::uniform_real_distribution<double> budget_dist(0.1, 2.0);
    for (int n : {2, 3}) {
        for (int trial = 0; trial < 250; ++trial) {
            std::vector<double> x(n);
            for (double& v : x) v = coord(rng);
            const double budget = budget_dist(rng);
            const auto out = project_onto_budget_simplex(x, budget);

            double sum = 0.0;
            for (double v : out) {
                CHECK(v >= 0.0);
                sum += v;
            }
            CHECK(sum == doctest::Approx(budget).epsilon(1e-9));

            const auto twice = project_onto_budget_simplex(out, budget);
            CHECK(l2(out, twice) < 1e-9);

            const auto grid = grid_search_projection(x, budget);
            CHECK(l2(out, grid) < 1e-4);
        }
    }
}

TEST_CASE("step length rule") {
    bool violation = false;
    CHECK(subgradient_step_length(1.5, 10.0, 10.0, 4, &violation) == 0.0);
    CHECK_FALSE(violation);
    CHECK(subgradient_step_length(1.5, 20.0, 10.0, 5, &violation) == doctest::Approx(3.0));
    CHECK_FALSE(violation);
    CHECK(subgradient_step_length(1.5, 9.0, 10.0, 5, &violation) == 0.0);
    CHECK(violation);
    CHECK_THROWS_AS(subgradient_step_length(1.5, 1.0, 0.0, 0, nullptr),
                    std::invalid_argument);
}

TEST_CASE("dual evaluation at the uniform split") {
    YFixture y(0.5);
    GoalFieldCache cache(y.graph);
    const DualMultipliers m = initial_multipliers(y.instance);
    const SubgradientInfo info = evaluate_dual(y.instance, m, cache);

    // per-cable costs are (w_L + w_B/|K|) c_e; check against dijkstra
    const double scale =
        y.instance.weights.length_weight + y.instance.weights.bundle_weight / 3.0;
    double want = 0.0;
    for (const Cable& c : y.instance.cables) {
        CostOverlay ov{scale, {}, {}, nullptr};
        want += dijkstra(y.graph, c.start, ov).dist[c.end];
    }
    CHECK(info.h_value == doctest::Approx(want).epsilon(1e-9));
    CHECK(info.norm_sq > 0);

    SUBCASE("w_B = 0: h equals the weighted shortest-path sum") {
        YFixture y0(0.0);
        GoalFieldCache cache0(y0.graph);
        const SubgradientInfo info0 =
            evaluate_dual(y0.instance, initial_multipliers(y0.instance), cache0);
        double sum = 0.0;
        for (const Cable& c : y0.instance.cables)
            sum += dijkstra(y0.graph, c.start).dist[c.end];
        CHECK(info0.h_value ==
              doctest::Approx(y0.instance.weights.length_weight * sum).epsilon(1e-9));
    }
}

TEST_CASE("weak duality against the exact oracle on tiny instances") {
    const auto suite = tiny_suite(4, 909);
    std::mt19937_64 rng(42);
    for (const auto& tiny : suite) {
        const Instance inst = tiny.instance(0.5);
        const ExactResult oracle = solve_exact(inst);
        if (oracle.proof != ExactProof::complete) continue;
        GoalFieldCache cache(*tiny.graph);

        DualMultipliers m = initial_multipliers(inst);
        for (int perturbation = 0; perturbation < 4; ++perturbation) {
            const SubgradientInfo info = evaluate_dual(inst, m, cache);
            CHECK(verify_lower_bound(info.h_value, oracle.f_opt));
            // random feasible reshuffle of a few edge budgets
            for (int t = 0; t < 5; ++t) {
                const EdgeId e = EdgeId(rng() % tiny.graph->num_edges());
                std::vector<double> v(inst.num_cables());
                for (int k = 0; k < inst.num_cables(); ++k)
                    v[k] = m.value(*tiny.graph, e, k) + 0.3 * double(rng() % 7);
                const double budget =
                    inst.weights.bundle_weight * tiny.graph->edge(e).cost;
                const auto proj = project_onto_budget_simplex(v, budget);
                const double uniform = tiny.graph->edge(e).cost * m.uniform_scale;
                for (int k = 0; k < inst.num_cables(); ++k)
                    m.deviation[k][e] = proj[k] - uniform;
            }
        }
    }
}

TEST_CASE("dual solver: w_B = 0 closes the gap immediately") {
    YFixture y(0.0);
    const DualSolveResult r = run_dual_solver(y.instance);
    double sum = 0.0;
    for (const Cable& c : y.instance.cables)
        sum += dijkstra(y.graph, c.start).dist[c.end];
    CHECK(r.f_best == doctest::Approx(sum).epsilon(1e-9));
    CHECK(r.h_best == doctest::Approx(sum).epsilon(1e-9));
    CHECK(r.history.size() < 50);  // terminates well before stagnation
    CHECK(r.weak_duality_violations == 0);
}

TEST_CASE("dual solver finds the exact optimum of the Y instance") {
    YFixture y(0.5);
    const ExactResult oracle = solve_exact(y.instance);
    REQUIRE(oracle.proof == ExactProof::complete);
    const DualSolveResult r = run_dual_solver(y.instance);
    CHECK(r.f_best == doctest::Approx(oracle.f_opt).epsilon(1e-9));
    CHECK(r.h_best <= r.f_best + 1e-9);
    CHECK(r.weak_duality_violations == 0);

    SUBCASE("every evaluated h respects weak duality") {
        for (const DualHistoryRecord& rec : r.history)
            CHECK(verify_lower_bound(rec.h, oracle.f_opt));
    }
    SUBCASE("h_best is the running maximum and non-decreasing") {
        double running = -kInf;
        for (const DualHistoryRecord& rec : r.history) {
            running = std::max(running, rec.h);
            CHECK(rec.h_best == doctest::Approx(running));
        }
    }
    SUBCASE("archive entries have distinct edge sets and the gap matches") {
        std::set<std::vector<EdgeId>> keys;
        for (const CandidateSolution& c : r.candidates) {
            validate_routing(y.instance, c.routing);
            CHECK(keys.insert(selected_edge_key(y.instance, c.routing)).second);
        }
        const DualHistoryRecord& last = r.history.back();
        if (last.h_best > 0.0)
            CHECK(last.gap == doctest::Approx(duality_gap(last.f_best, last.h_best)));
    }
}

TEST_CASE("dual solver is deterministic") {
    YFixture y(0.6);
    const DualSolveResult a = run_dual_solver(y.instance);
    const DualSolveResult b = run_dual_solver(y.instance);
    CHECK(a.best_routing == b.best_routing);
    CHECK(a.f_best == b.f_best);
    CHECK(a.h_best == b.h_best);
    REQUIRE(a.history.size() == b.history.size());
    for (size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].h == b.history[i].h);
        CHECK(a.history[i].f_best == b.history[i].f_best);
    }
    REQUIRE(a.candidates.size() == b.candidates.size());
    for (size_t i = 0; i < a.candidates.size(); ++i)
        CHECK(a.candidates[i].routing == b.candidates[i].routing);
}
