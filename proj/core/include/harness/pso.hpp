#pragma once

#include <cstdint>
#include <vector>

#include "harness/model.hpp"
#include "harness/search.hpp"

namespace harness {

// Continuous encoding of a candidate harness: an active junction count and
// 2|K|-2 movable junction positions, 3(2|K|-2)+1 scalars in total.
struct Particle {
    double active_count = 0.0;        // decoded by rounding half-up, clamped
    std::vector<Vec3> positions;       // size 2|K|-2
    double count_velocity = 0.0;
    std::vector<Vec3> velocities;      // same shape as positions

    int decoded_count(int max_points) const;
};

struct PsoParams {
    int swarm_size = 30;
    int iterations = 100;
    double inertia = 0.729;
    double inertia_end = -1.0;  // >= 0 enables linear decay towards this value
    double cognitive = 1.494;
    double social = 1.494;
    double velocity_clamp = 0.2;  // fraction of the bounding-box extent per axis
    std::uint64_t rng_seed = 1;

    // Canonical coefficient profiles from the PSO literature.
    static PsoParams constriction() { return {}; }
    static PsoParams decaying() {
        PsoParams p;
        p.inertia = 0.9;
        p.inertia_end = 0.4;
        p.cognitive = 2.0;
        p.social = 2.0;
        return p;
    }
};

struct DecodeResult {
    Routing routing;
    double fitness = kInf;  // weighted objective; +inf when disconnected
    bool feasible = false;
};

// Decodes a particle: snaps active junction points to grid nodes (points
// inside obstacles are disregarded, coinciding points merge), spans all
// terminals and junctions with a tree grown by repeated nearest attachment,
// prunes junction nodes of tree degree < 3, and reads each cable's route
// off the tree.
DecodeResult decode_particle(const Instance& instance, const Particle& particle);

struct PsoResult {
    Routing best_routing;
    double f_best = kInf;
    std::vector<double> history;  // best fitness after each iteration
};

// Global-best PSO over the junction encoding. Fitness evaluations within an
// iteration run on up to `threads` workers; random draws stay sequential in
// particle order, so results are deterministic for a given seed.
PsoResult run_pso(const Instance& instance, const PsoParams& params = {},
                  int threads = 1);

}  // namespace harness
