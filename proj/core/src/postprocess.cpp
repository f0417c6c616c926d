#include "harness/postprocess.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "harness/detail/topology_edit.hpp"

namespace harness {

namespace {

// Rule applying to a segment given its endpoint kinds; zero when none does.
double segment_rule(const detail::Decomposition& d, const BundleSegment& seg,
                    const LengthRules& rules) {
    if (seg.nodes.size() < 2) return 0.0;  // degenerate, no physical segment
    const bool front_terminal = d.terminals.count(seg.nodes.front()) > 0;
    const bool back_terminal = d.terminals.count(seg.nodes.back()) > 0;
    if (front_terminal && back_terminal) return 0.0;
    if (front_terminal || back_terminal) return rules.min_terminal_branch;
    return rules.min_branch_branch;
}

struct Violation {
    double deficit = 0.0;
    int segment = -1;
};

std::vector<Violation> find_violations(const detail::Decomposition& d,
                                       const LengthRules& rules) {
    std::vector<Violation> out;
    for (int s = 0; s < static_cast<int>(d.topo.segments.size()); ++s) {
        const BundleSegment& seg = d.topo.segments[s];
        const double rule = segment_rule(d, seg, rules);
        if (seg.length < rule) out.push_back({rule - seg.length, s});
    }
    std::sort(out.begin(), out.end(), [&](const Violation& a, const Violation& b) {
        if (a.deficit != b.deficit) return a.deficit > b.deficit;
        return d.topo.segments[a.segment].nodes < d.topo.segments[b.segment].nodes;
    });
    return out;
}

// Placement filter: every surviving spoke of the relocated branch point must
// satisfy its applicable rule. A spoke whose far end coincides with the
// placement vanishes and carries no rule.
detail::PlacementFilter rule_filter(const Instance& instance,
                                    const detail::Decomposition& d,
                                    const LengthRules& rules) {
    return [&instance, &d, &rules](NodeId v, const std::vector<detail::SpokeView>& spokes) {
        for (const detail::SpokeView& sp : spokes) {
            if (v == sp.far_end) continue;
            if (sp.field->dist[v] == kInf) return false;
            const double rule = d.terminals.count(sp.far_end) ? rules.min_terminal_branch
                                                              : rules.min_branch_branch;
            if (rule <= 0.0) continue;
            const double len =
                detail::spoke_geometric_length(*instance.graph, *sp.field, v);
            if (len < rule - 1e-12 * std::max(1.0, rule)) return false;
        }
        return true;
    };
}

// Nearest adjacent branch point by connecting-segment length, or kNoNode.
NodeId nearest_adjacent_branch(const detail::Decomposition& d, NodeId b) {
    NodeId best = kNoNode;
    double best_len = kInf;
    auto it = d.segments_at.find(b);
    if (it == d.segments_at.end()) return kNoNode;
    const std::set<NodeId> branches(d.topo.branch_points.begin(), d.topo.branch_points.end());
    for (int s : it->second) {
        const BundleSegment& seg = d.topo.segments[s];
        const NodeId far = seg.nodes.front() == b ? seg.nodes.back() : seg.nodes.front();
        if (far == b || !branches.count(far) || d.terminals.count(far)) continue;
        if (seg.length < best_len || (seg.length == best_len && far < best)) {
            best_len = seg.length;
            best = far;
        }
    }
    return best;
}

}  // namespace

MinLengthResult enforce_min_lengths(const Instance& instance, const Routing& routing,
                                    const LengthRules& rules) {
    validate_routing(instance, routing);
    Routing current = routing;
    if (rules.trivial()) return {current, true};

    for (int step = 0; step < 10'000; ++step) {
        detail::Decomposition decomp = detail::decompose(instance, current);
        const std::vector<Violation> violations = find_violations(decomp, rules);
        if (violations.empty()) return {current, true};

        const BundleSegment& target = decomp.topo.segments[violations.front().segment];
        const std::set<NodeId> movable = [&] {
            const auto v = decomp.movable_branch_points();
            return std::set<NodeId>(v.begin(), v.end());
        }();

        struct Candidate {
            Routing routing;
            double f = kInf;
            int violations = 0;
        };
        std::optional<Candidate> best;

        auto consider = [&](const std::optional<detail::RelocationPlan>& plan) {
            if (!plan) return;
            Routing rebuilt =
                detail::rebuild_with_replacements(current, decomp, plan->replacements);
            detail::Decomposition after = detail::decompose(instance, rebuilt);
            const int count = static_cast<int>(find_violations(after, rules).size());
            if (count >= static_cast<int>(violations.size())) return;
            const double f = weighted_objective(instance, rebuilt);
            if (!best || f < best->f)
                best = Candidate{std::move(rebuilt), f, count};
        };

        const detail::PlacementFilter filter = rule_filter(instance, decomp, rules);
        for (NodeId b : {target.nodes.front(), target.nodes.back()}) {
            if (!movable.count(b)) continue;
            consider(detail::plan_single_relocation(instance, decomp, b, filter));
            const NodeId merge_into = nearest_adjacent_branch(decomp, b);
            if (merge_into != kNoNode)
                consider(detail::plan_single_relocation(instance, decomp, b, filter,
                                                        merge_into));
        }

        if (!best) return {current, false};  // no move helps; best effort
        current = std::move(best->routing);
    }
    return {current, false};
}

}  // namespace harness
