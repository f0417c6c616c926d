#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "harness/construct.hpp"
#include "harness/dual.hpp"
#include "harness/exact.hpp"
#include "harness/grid.hpp"
#include "harness/model.hpp"
#include "harness/pso.hpp"

namespace harness {

inline constexpr int kSceneSchemaVersion = 1;

struct DirectionPenaltySettings {
    double cone_half_angle_deg = 90.0;
    double penalty = 1.0;
};

struct CableSpec {
    Vec3 start, end;
    std::optional<Vec3> start_direction, end_direction;
};

// Parsed scene file: routing environment, cables in world coordinates,
// default sweep weights, and per-algorithm parameter blocks.
struct Scene {
    GridSpec grid;
    std::vector<Zone> zones;
    std::vector<CableSpec> cable_specs;
    std::vector<double> bundle_weights;
    std::uint64_t rng_seed = 1;
    std::optional<DirectionPenaltySettings> direction_penalty;

    SubgradientParams subgradient;
    AlphaConstructParams alpha;
    PsoParams pso;
    std::string pso_profile = "constriction";
    ExactLimits exact;
};

// Scene with its built graph and snapped terminals; instances share the
// graph and differ only in weights.
struct LoadedScene {
    Scene scene;
    std::shared_ptr<const RoutingGraph> graph;
    std::vector<Cable> cables;
    std::vector<Terminal> terminals;  // two per cable: start, end

    Instance instance(double bundle_weight) const {
        Instance inst;
        inst.graph = graph.get();
        inst.cables = cables;
        inst.weights = Weights::from_bundle_weight(bundle_weight);
        inst.validate();
        return inst;
    }
};

// Parses and validates the scene JSON; errors cite the offending field path,
// e.g. "grid.cell_size[1]". Terminals must lie inside the grid bounding box.
LoadedScene load_scene(const std::string& path);
LoadedScene load_scene_from_string(const std::string& json_text);

}  // namespace harness
