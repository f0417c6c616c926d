#include "harness/scene.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw std::runtime_error("scene error at " + path + ": " + message);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        fail(path.empty() ? key : path + "." + key, "missing field");
    return j.at(key);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

Vec3 vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected [x, y, z]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]"),
            number(j[2], path + "[2]")};
}

GridSpec parse_grid(const json& j, const std::string& path) {
    GridSpec g;
    g.origin = vec3(require(j, "origin", path), path + ".origin");
    g.cell_size = vec3(require(j, "cell_size", path), path + ".cell_size");
    const json& dims = require(j, "dims", path);
    if (!dims.is_array() || dims.size() != 3) fail(path + ".dims", "expected [nx, ny, nz]");
    g.nx = integer(dims[0], path + ".dims[0]");
    g.ny = integer(dims[1], path + ".dims[1]");
    g.nz = integer(dims[2], path + ".dims[2]");
    if (g.nx < 1 || g.ny < 1 || g.nz < 1) fail(path + ".dims", "dims must be >= 1");
    const char* axis[] = {"[0]", "[1]", "[2]"};
    const double cells[] = {g.cell_size.x, g.cell_size.y, g.cell_size.z};
    for (int i = 0; i < 3; ++i)
        if (!(cells[i] > 0.0))
            fail(path + ".cell_size" + axis[i], "cell size must be positive");
    return g;
}

Zone parse_zone(const json& j, const std::string& path) {
    Zone z;
    const std::string kind = require(j, "kind", path).get<std::string>();
    if (kind == "obstacle") {
        z.kind = Zone::Kind::obstacle;
    } else if (kind == "cost_multiplier") {
        z.kind = Zone::Kind::cost_multiplier;
        z.multiplier = number(require(j, "multiplier", path), path + ".multiplier");
        if (!(z.multiplier > 0.0)) fail(path + ".multiplier", "multiplier must be positive");
    } else {
        fail(path + ".kind", "expected \"obstacle\" or \"cost_multiplier\"");
    }
    const json& box = require(j, "box", path);
    z.box.lo = vec3(require(box, "min", path + ".box"), path + ".box.min");
    z.box.hi = vec3(require(box, "max", path + ".box"), path + ".box.max");
    if (!z.box.valid()) fail(path + ".box", "box min exceeds max");
    return z;
}

CableSpec parse_cable(const json& j, const std::string& path) {
    CableSpec c;
    c.start = vec3(require(j, "start", path), path + ".start");
    c.end = vec3(require(j, "end", path), path + ".end");
    if (j.contains("start_direction"))
        c.start_direction = vec3(j.at("start_direction"), path + ".start_direction");
    if (j.contains("end_direction"))
        c.end_direction = vec3(j.at("end_direction"), path + ".end_direction");
    return c;
}

void parse_params(Scene& scene, const json& j, const std::string& path) {
    if (j.contains("shrh")) {
        const json& p = j.at("shrh");
        SubgradientParams& s = scene.subgradient;
        if (p.contains("local_search_period"))
            s.local_search_period = integer(p.at("local_search_period"), path + ".shrh.local_search_period");
        if (p.contains("stagnation_window"))
            s.stagnation_window = integer(p.at("stagnation_window"), path + ".shrh.stagnation_window");
        if (p.contains("stagnation_tol"))
            s.stagnation_tol = number(p.at("stagnation_tol"), path + ".shrh.stagnation_tol");
        if (p.contains("step_scale"))
            s.step_scale = number(p.at("step_scale"), path + ".shrh.step_scale");
        if (p.contains("step_decay"))
            s.step_decay = number(p.at("step_decay"), path + ".shrh.step_decay");
        if (p.contains("decay_patience"))
            s.decay_patience = integer(p.at("decay_patience"), path + ".shrh.decay_patience");
        if (p.contains("max_iterations"))
            s.max_iterations = integer(p.at("max_iterations"), path + ".shrh.max_iterations");
    }
    if (j.contains("asphrh")) {
        const json& p = j.at("asphrh");
        AlphaConstructParams& a = scene.alpha;
        if (p.contains("alpha")) a.alpha = number(p.at("alpha"), path + ".asphrh.alpha");
        if (p.contains("n_paths")) a.n_paths = integer(p.at("n_paths"), path + ".asphrh.n_paths");
        if (p.contains("n_initial"))
            a.n_initial = integer(p.at("n_initial"), path + ".asphrh.n_initial");
    }
    if (j.contains("pso")) {
        const json& p = j.at("pso");
        if (p.contains("profile")) {
            scene.pso_profile = p.at("profile").get<std::string>();
            if (scene.pso_profile == "constriction")
                scene.pso = PsoParams::constriction();
            else if (scene.pso_profile == "decaying")
                scene.pso = PsoParams::decaying();
            else
                fail(path + ".pso.profile", "expected \"constriction\" or \"decaying\"");
        }
        if (p.contains("swarm_size"))
            scene.pso.swarm_size = integer(p.at("swarm_size"), path + ".pso.swarm_size");
        if (p.contains("iterations"))
            scene.pso.iterations = integer(p.at("iterations"), path + ".pso.iterations");
    }
    if (j.contains("exact")) {
        const json& p = j.at("exact");
        ExactLimits& e = scene.exact;
        if (p.contains("max_paths_per_cable"))
            e.max_paths_per_cable =
                integer(p.at("max_paths_per_cable"), path + ".exact.max_paths_per_cable");
        if (p.contains("max_product"))
            e.max_product = p.at("max_product").get<std::int64_t>();
        if (p.contains("cost_cap_ratio"))
            e.cost_cap_ratio = number(p.at("cost_cap_ratio"), path + ".exact.cost_cap_ratio");
    }
}

LoadedScene build(Scene scene) {
    LoadedScene out;

    auto graph = std::make_shared<RoutingGraph>(build_graph(scene.grid, scene.zones));
    const Box bounds = scene.grid.bounds();

    // Snap terminals, then apply direction penalties onto the graph copy.
    std::vector<Terminal> terminals;
    for (size_t i = 0; i < scene.cable_specs.size(); ++i) {
        const CableSpec& c = scene.cable_specs[i];
        const std::string path = "cables[" + std::to_string(i) + "]";
        if (!bounds.contains(c.start)) fail(path + ".start", "terminal outside bounding box");
        if (!bounds.contains(c.end)) fail(path + ".end", "terminal outside bounding box");
        Terminal start{c.start, snap_terminal(*graph, c.start), c.start_direction};
        Terminal end{c.end, snap_terminal(*graph, c.end), c.end_direction};
        terminals.push_back(start);
        terminals.push_back(end);
    }
    if (scene.direction_penalty && scene.direction_penalty->penalty > 1.0) {
        for (const Terminal& t : terminals) {
            if (!t.direction) continue;
            *graph = apply_terminal_direction_penalty(
                *graph, t, scene.direction_penalty->cone_half_angle_deg,
                scene.direction_penalty->penalty);
        }
    }

    out.graph = graph;
    out.terminals = std::move(terminals);
    for (size_t i = 0; i < scene.cable_specs.size(); ++i) {
        const NodeId a = out.terminals[2 * i].node;
        const NodeId b = out.terminals[2 * i + 1].node;
        if (a == b)
            std::fprintf(stderr,
                         "warning: cables[%zu] start and end snap to the same node; "
                         "it contributes nothing to the objectives\n",
                         i);
        out.cables.push_back({a, b});
    }
    out.scene = std::move(scene);
    return out;
}

LoadedScene parse(const json& j) {
    if (!j.contains("schema_version") || j.at("schema_version") != kSceneSchemaVersion)
        fail("schema_version", "missing or unsupported");

    Scene scene;
    scene.grid = parse_grid(require(j, "grid", ""), "grid");

    if (j.contains("zones")) {
        const json& zones = j.at("zones");
        if (!zones.is_array()) fail("zones", "expected an array");
        for (size_t i = 0; i < zones.size(); ++i)
            scene.zones.push_back(parse_zone(zones[i], "zones[" + std::to_string(i) + "]"));
    }

    const json& cables = require(j, "cables", "");
    if (!cables.is_array() || cables.empty()) fail("cables", "expected a non-empty array");
    for (size_t i = 0; i < cables.size(); ++i)
        scene.cable_specs.push_back(parse_cable(cables[i], "cables[" + std::to_string(i) + "]"));

    const json& weights = require(j, "weights", "");
    if (!weights.is_array() || weights.empty()) fail("weights", "expected a non-empty array");
    for (size_t i = 0; i < weights.size(); ++i) {
        const std::string path = "weights[" + std::to_string(i) + "]";
        const double w = number(weights[i], path);
        if (w < 0.0 || w > 1.0) fail(path, "bundle weight must lie in [0, 1]");
        scene.bundle_weights.push_back(w);
    }

    if (j.contains("rng_seed")) scene.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    if (j.contains("direction_penalty")) {
        const json& p = j.at("direction_penalty");
        DirectionPenaltySettings s;
        s.cone_half_angle_deg =
            number(require(p, "cone_half_angle_deg", "direction_penalty"),
                   "direction_penalty.cone_half_angle_deg");
        s.penalty = number(require(p, "penalty", "direction_penalty"),
                           "direction_penalty.penalty");
        if (s.penalty < 1.0) fail("direction_penalty.penalty", "penalty must be >= 1");
        scene.direction_penalty = s;
    }
    if (j.contains("params")) parse_params(scene, j.at("params"), "params");

    return build(std::move(scene));
}

}  // namespace

LoadedScene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scene file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_scene_from_string(buffer.str());
}

LoadedScene load_scene_from_string(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("scene JSON parse error: ") + e.what());
    }
    return parse(j);
}

}  // namespace harness
