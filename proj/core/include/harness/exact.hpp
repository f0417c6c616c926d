#pragma once

#include <cstdint>

#include "harness/model.hpp"

namespace harness {

struct ExactLimits {
    int max_paths_per_cable = 5'000;
    std::int64_t max_product = 10'000'000;  // product-search node budget
    double cost_cap_ratio = 3.0;            // ignore paths above ratio * shortest
};

enum class ExactProof { complete, truncated };

struct ExactResult {
    Routing routing;
    double f_opt = 0.0;
    ExactProof proof = ExactProof::complete;
};

// Enumerates all simple paths per cable within the cost cap (depth-first
// with admissible pruning) and minimizes the weighted objective over the
// cartesian product with branch-and-bound. `proof` degrades to truncated
// whenever an enumeration limit was hit; the incumbent is still returned.
// The first cable's path list is partitioned across `threads` workers.
ExactResult solve_exact(const Instance& instance, const ExactLimits& limits = {},
                        int threads = 1);

// Weak-duality check: h_value must not exceed the proven optimum.
bool verify_lower_bound(double h_value, double f_opt);

}  // namespace harness
