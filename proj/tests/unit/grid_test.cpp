#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/builders.hpp"

using namespace harness;
using namespace testsupport;

TEST_CASE("line grid: nodes, edges, unit costs") {
    const RoutingGraph g = make_grid(3, 1, 1);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 2);
    for (EdgeId e = 0; e < g.num_edges(); ++e) CHECK(g.edge(e).cost == doctest::Approx(1.0));
}

TEST_CASE("obstacle removes the center node and its edges") {
    const RoutingGraph g =
        make_grid(3, 3, 1, {obstacle({0.9, 0.9, -0.1}, {1.1, 1.1, 0.1})});
    CHECK(g.num_nodes() == 8);
    CHECK(g.node_at(1, 1, 0) == kNoNode);
    for (const GraphEdge& e : g.edges()) {
        // no edge may pass through the removed center
        const Vec3 mid = (g.node(e.u).pos + g.node(e.v).pos) * 0.5;
        CHECK(!(mid.x == 1.0 && mid.y == 1.0));
    }
}

TEST_CASE("cost multiplier feeds the mean-of-endpoints edge cost") {
    const RoutingGraph g =
        make_grid(2, 1, 1, {cost_zone({0.9, -0.1, -0.1}, {1.1, 0.1, 0.1}, 3.0)});
    REQUIRE(g.num_edges() == 1);
    CHECK(g.edge(0).cost == doctest::Approx(1.0 * (1.0 + 3.0) / 2.0));
}

TEST_CASE("edge cost formula: length x mean endpoint cost, bit-exact") {
    const RoutingGraph g = make_grid(3, 3, 2, {cost_zone({0, 0, 0}, {1, 1, 1}, 2.5)});
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const GraphEdge& ed = g.edge(e);
        const double expected = distance(g.node(ed.u).pos, g.node(ed.v).pos) *
                                0.5 * (g.node(ed.u).cost + g.node(ed.v).cost);
        CHECK(ed.cost == expected);  // exact
        CHECK(ed.cost > 0.0);
        CHECK(g.edge_cost(e) == expected);
    }
}

TEST_CASE("diagonal neighbors exist under the infinity-norm rule") {
    const RoutingGraph g = make_grid(2, 2, 1);
    const EdgeId diag = g.edge_between(g.node_at(0, 0, 0), g.node_at(1, 1, 0));
    REQUIRE(diag != kNoEdge);
    CHECK(g.edge(diag).cost == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("anisotropic cells: length 2 with costs (1,3) gives 4") {
    GridSpec spec;
    spec.cell_size = {2.0, 1.0, 1.0};
    spec.nx = 2;
    spec.ny = 1;
    spec.nz = 1;
    const RoutingGraph g =
        build_graph(spec, {cost_zone({1.9, -0.1, -0.1}, {2.1, 0.1, 0.1}, 3.0)});
    REQUIRE(g.num_edges() == 1);
    CHECK(g.edge(0).cost == doctest::Approx(4.0));
}

TEST_CASE("interior node of a full grid has 26 neighbors") {
    const RoutingGraph g = make_grid(3, 3, 3);
    const NodeId center = g.node_at(1, 1, 1);
    CHECK(g.neighbors(center).size() == 26);
    const NodeId corner = g.node_at(0, 0, 0);
    CHECK(g.neighbors(corner).size() == 7);
    const NodeId face = g.node_at(1, 1, 0);
    CHECK(g.neighbors(face).size() == 17);
}

TEST_CASE("obstacle monotonicity: adding a zone never adds nodes or edges") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto coord = [&]() { return double(rng() % 4) - 0.5; };
        std::vector<Zone> zones;
        for (int i = 0; i < int(rng() % 3); ++i) {
            Vec3 lo{coord(), coord(), 0.0};
            Vec3 hi = lo + Vec3{1.0, 1.0, 1.0};
            zones.push_back(obstacle(lo, hi));
        }
        RoutingGraph before;
        try {
            before = make_grid(4, 4, 2, zones);
        } catch (const std::exception&) {
            continue;  // fully blocked already
        }
        Vec3 lo{coord(), coord(), 0.0};
        zones.push_back(obstacle(lo, lo + Vec3{1.2, 1.2, 0.6}));
        try {
            const RoutingGraph after = make_grid(4, 4, 2, zones);
            CHECK(after.num_nodes() <= before.num_nodes());
            CHECK(after.num_edges() <= before.num_edges());
        } catch (const std::exception& e) {
            CHECK(std::string(e.what()) == "environment fully blocked");
        }
    }
}

TEST_CASE("fully blocked environment is an error") {
    CHECK_THROWS_WITH(make_grid(2, 2, 1, {obstacle({-1, -1, -1}, {2, 2, 2})}),
                      "environment fully blocked");
}

TEST_CASE("build_graph is deterministic") {
    auto dump = [](const RoutingGraph& g) {
        std::ostringstream os;
        for (const GraphNode& n : g.nodes()) os << n.linear << ':' << n.cost << ';';
        for (const GraphEdge& e : g.edges()) os << e.u << '-' << e.v << ':' << e.cost << ';';
        return os.str();
    };
    const std::vector<Zone> zones = {obstacle({1, 1, 0}, {2, 2, 1}),
                                     cost_zone({0, 0, 0}, {4, 1, 1}, 2.0)};
    CHECK(dump(make_grid(5, 4, 2, zones)) == dump(make_grid(5, 4, 2, zones)));
}

TEST_CASE("snap_terminal basics and tie rule") {
    const RoutingGraph g = make_grid(3, 2, 1);
    SUBCASE("exactly on a node") {
        CHECK(snap_terminal(g, {2.0, 1.0, 0.0}) == g.node_at(2, 1, 0));
    }
    SUBCASE("equidistant points snap to the smaller linear index") {
        // halfway between nodes (1,0) and (2,0): linear indices 1 and 2
        CHECK(snap_terminal(g, {1.5, 0.0, 0.0}) == g.node_at(1, 0, 0));
    }
}

TEST_CASE("snap skips removed nodes (brute-force cross-check)") {
    const RoutingGraph g =
        make_grid(3, 3, 1, {obstacle({0.9, 0.9, -0.1}, {1.1, 1.1, 0.1})});
    const Vec3 probe{1.05, 1.0, 0.0};  // nearest full-grid node is removed
    const NodeId snapped = snap_terminal(g, probe);
    NodeId want = kNoNode;
    double best = kInf;
    for (NodeId n = 0; n < g.num_nodes(); ++n) {
        const double d = distance(g.node(n).pos, probe);
        if (d < best) {
            best = d;
            want = n;
        }
    }
    CHECK(snapped == want);
    CHECK(snapped != kNoNode);
}

TEST_CASE("terminal direction penalty scales edges behind the connector") {
    const RoutingGraph g = make_grid(3, 1, 1);
    Terminal t;
    t.node = g.node_at(1, 0, 0);
    t.world_point = g.node(t.node).pos;
    t.direction = Vec3{1.0, 0.0, 0.0};

    SUBCASE("penalty 1 leaves the graph unchanged") {
        const RoutingGraph out = apply_terminal_direction_penalty(g, t, 90.0, 1.0);
        for (EdgeId e = 0; e < g.num_edges(); ++e)
            CHECK(out.edge(e).cost == g.edge(e).cost);
    }
    SUBCASE("the edge behind gets scaled, the edge ahead does not") {
        const RoutingGraph out = apply_terminal_direction_penalty(g, t, 90.0, 10.0);
        const EdgeId behind = out.edge_between(out.node_at(0, 0, 0), out.node_at(1, 0, 0));
        const EdgeId ahead = out.edge_between(out.node_at(1, 0, 0), out.node_at(2, 0, 0));
        CHECK(out.edge(behind).cost == doctest::Approx(10.0));
        CHECK(out.edge(ahead).cost == doctest::Approx(1.0));
    }
    SUBCASE("missing direction is a precondition violation") {
        t.direction.reset();
        CHECK_THROWS_AS(apply_terminal_direction_penalty(g, t, 90.0, 10.0),
                        std::invalid_argument);
    }
}
