#include "harness/construct.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "harness/parallel.hpp"

namespace harness {

AlphaPathSets generate_alpha_sets(const Instance& instance,
                                  const AlphaConstructParams& params) {
    AlphaPathSets sets;
    sets.reserve(instance.cables.size());
    for (const Cable& c : instance.cables) {
        if (c.start == c.end) {
            sets.push_back({{c.start}});
            continue;
        }
        sets.push_back(alpha_shortest_paths(*instance.graph, c.start, c.end,
                                            params.alpha, params.n_paths));
    }
    return sets;
}

Routing construct_initial_routing(const Instance& instance, const AlphaPathSets& phi_sets,
                                  const std::vector<int>& sequence,
                                  LocalSearchContext& ctx) {
    const int k_count = instance.num_cables();
    if (static_cast<int>(sequence.size()) != k_count)
        throw std::invalid_argument("sequence must permute all cables");
    for (const auto& set : phi_sets)
        if (set.empty()) throw std::invalid_argument("empty alpha-path set");

    AlphaPathSets phi = phi_sets;
    for (int cable : sequence) {
        phi[cable].clear();
        std::vector<Path> others;
        for (int k = 0; k < k_count; ++k)
            others.insert(others.end(), phi[k].begin(), phi[k].end());
        const FixedEdgeSet fixed = FixedEdgeSet::from_paths(*instance.graph, others);
        phi[cable] = {route_with_shared_discount(instance, cable, fixed, ctx)};
    }

    Routing r;
    r.paths.reserve(k_count);
    for (int k = 0; k < k_count; ++k) r.paths.push_back(phi[k].front());
    return r;
}

namespace {

// Identity permutation first, then seeded shuffles, all distinct. Caps at
// the number of permutations that exist.
std::vector<std::vector<int>> distinct_sequences(int k_count, int wanted,
                                                 std::uint64_t seed) {
    double permutations = 1.0;
    for (int i = 2; i <= k_count && permutations < 1e18; ++i) permutations *= i;
    const int target = permutations < static_cast<double>(wanted)
                           ? static_cast<int>(permutations)
                           : wanted;

    std::vector<std::vector<int>> out;
    std::set<std::vector<int>> seen;
    std::vector<int> identity(k_count);
    std::iota(identity.begin(), identity.end(), 0);
    out.push_back(identity);
    seen.insert(identity);

    std::mt19937_64 rng(seed);
    int guard = 0;
    while (static_cast<int>(out.size()) < target && guard < 1000 * target) {
        ++guard;
        std::vector<int> perm = identity;
        for (int i = k_count - 1; i > 0; --i) {
            std::uniform_int_distribution<int> pick(0, i);
            std::swap(perm[i], perm[pick(rng)]);
        }
        if (seen.insert(perm).second) out.push_back(std::move(perm));
    }
    return out;
}

}  // namespace

AlphaSolveResult run_alpha_solver(const Instance& instance, const AlphaConstructParams& params,
                                  GoalFieldCache* shared_cache, int threads,
                                  const AlphaPathSets* precomputed_sets) {
    instance.validate();
    if (params.n_initial < 1) throw std::invalid_argument("n_initial must be positive");

    LocalSearchContext base_ctx = shared_cache ? LocalSearchContext(*shared_cache)
                                               : LocalSearchContext(*instance.graph);
    const AlphaPathSets sets =
        precomputed_sets ? *precomputed_sets : generate_alpha_sets(instance, params);

    const auto sequences =
        distinct_sequences(instance.num_cables(), params.n_initial, params.sequence_seed);

    std::vector<Routing> initials;
    initials.reserve(sequences.size());
    for (const auto& seq : sequences)
        initials.push_back(construct_initial_routing(instance, sets, seq, base_ctx));

    std::vector<Routing> polished(initials.size());
    parallel_for(static_cast<int>(initials.size()), threads, [&](int i) {
        LocalSearchContext ctx(*base_ctx.cache);
        polished[i] = run_local_search(instance, initials[i], ctx);
    });

    AlphaSolveResult result;
    std::set<std::vector<EdgeId>> seen;
    for (const Routing& r : polished) {
        const double f = weighted_objective(instance, r);
        if (seen.insert(selected_edge_key(instance, r)).second)
            result.candidates.push_back({r, f});
        if (f < result.f_best) {
            result.f_best = f;
            result.best_routing = r;
        }
    }
    return result;
}

}  // namespace harness
