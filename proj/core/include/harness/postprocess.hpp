#pragma once

#include "harness/local_search.hpp"
#include "harness/model.hpp"

namespace harness {

// Physical minimum lengths (meters) from clipping rules: between a terminal
// and a branch point, and between two branch points.
struct LengthRules {
    double min_terminal_branch = 0.0;
    double min_branch_branch = 0.0;

    bool trivial() const { return min_terminal_branch <= 0.0 && min_branch_branch <= 0.0; }
};

struct MinLengthResult {
    Routing routing;
    bool satisfied = false;
};

// Greedy repair: picks the most violating bundle segment and either
// relocates one of its branch points (restricted to placements whose
// resulting segments all satisfy the rules) or merges it into an adjacent
// branch point, applying the feasible candidate with the smallest objective.
// Stops when no violation remains or no candidate reduces the violation
// count; the routing stays feasible either way.
MinLengthResult enforce_min_lengths(const Instance& instance, const Routing& routing,
                                    const LengthRules& rules);

}  // namespace harness
