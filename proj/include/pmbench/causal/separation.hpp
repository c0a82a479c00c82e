#pragma once

// d-separation via directed reachability over (node, travel-direction)
// states, the backdoor criterion, and exhaustive minimal-adjustment-set
// search. Graphs here are small (about a dozen nodes), so the subset
// search needs no heuristics.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmbench/causal/dag.hpp"
#include "pmbench/errors.hpp"

namespace pmbench {

namespace detail {

// Active-trail reachability (Bayes-ball style): returns the set of nodes
// d-connected to x given conditioning set z. States carry the direction
// the trail entered a node from: "up" when arriving from a child, "down"
// when arriving from a parent; colliders reopen when the node is z or an
// ancestor of z.
inline std::vector<bool> d_connected_set(const DagView& view, int x,
                                         const std::vector<bool>& in_z) {
    const std::size_t n = view.names.size();

    // ancestors of z, z included
    std::vector<bool> anc_z(n, false);
    {
        std::vector<int> stack;
        for (std::size_t v = 0; v < n; ++v) {
            if (in_z[v]) { anc_z[v] = true; stack.push_back(static_cast<int>(v)); }
        }
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int p : view.parents[v]) {
                if (!anc_z[p]) { anc_z[p] = true; stack.push_back(p); }
            }
        }
    }

    constexpr int kUp = 0, kDown = 1;
    std::vector<std::array<bool, 2>> visited(n, {false, false});
    std::vector<bool> reachable(n, false);
    std::vector<std::pair<int, int>> stack{{x, kUp}};
    while (!stack.empty()) {
        const auto [v, dir] = stack.back();
        stack.pop_back();
        if (visited[v][dir]) continue;
        visited[v][dir] = true;
        if (!in_z[v]) reachable[v] = true;

        if (dir == kUp) {
            if (!in_z[v]) {
                for (int p : view.parents[v]) stack.push_back({p, kUp});
                for (int c : view.children[v]) stack.push_back({c, kDown});
            }
        } else {
            if (!in_z[v]) {
                for (int c : view.children[v]) stack.push_back({c, kDown});
            }
            if (anc_z[v]) {  // collider at v (or below) is opened by z
                for (int p : view.parents[v]) stack.push_back({p, kUp});
            }
        }
    }
    return reachable;
}

inline std::vector<bool> member_mask(const DagView& view, const std::set<std::string>& names) {
    std::vector<bool> mask(view.names.size(), false);
    for (const auto& name : names) mask[view.id(name)] = true;
    return mask;
}

}  // namespace detail

// True iff every undirected path between x and y is blocked by z under the
// chain/fork/collider rules.
inline bool d_separated(const Dag& dag, const std::string& x, const std::string& y,
                        const std::set<std::string>& z) {
    const detail::DagView view(dag);
    const int xi = view.id(x);
    const int yi = view.id(y);
    const std::vector<bool> in_z = detail::member_mask(view, z);
    if (in_z[xi] || in_z[yi]) {
        throw GraphError("d-separation query endpoints may not be conditioned on");
    }
    const std::vector<bool> reach = detail::d_connected_set(view, xi, in_z);
    return !reach[yi];
}

// Backdoor criterion: z holds no descendant of the treatment and blocks
// every path that enters the treatment through an incoming edge. The
// blocking test runs d-separation on the graph with the treatment's
// outgoing edges removed, where all surviving treatment-outcome paths are
// exactly the backdoor paths.
inline bool satisfies_backdoor(const Dag& dag, const std::string& treatment,
                               const std::string& outcome, const std::set<std::string>& z) {
    if (treatment == outcome) throw GraphError("treatment and outcome must differ");
    detail::DagView view(dag);
    const int t = view.id(treatment);
    const int o = view.id(outcome);
    if (z.count(treatment) || z.count(outcome)) return false;

    const std::vector<bool> desc = view.descendants(t);
    for (const auto& name : z) {
        if (desc[view.id(name)]) return false;
    }

    detail::DagView reduced = view;
    reduced.children[t].clear();
    for (auto& plist : reduced.parents) {
        std::erase(plist, t);
    }
    const std::vector<bool> in_z = detail::member_mask(reduced, z);
    const std::vector<bool> reach = detail::d_connected_set(reduced, t, in_z);
    return !reach[o];
}

// Smallest backdoor adjustment set over non-descendants of the treatment,
// searched exhaustively by cardinality; ties break toward lexicographically
// smaller node-name sets. Returns nullopt when no subset qualifies.
inline std::optional<std::set<std::string>> find_minimal_adjustment_set(
    const Dag& dag, const std::string& treatment, const std::string& outcome) {
    const detail::DagView view(dag);
    const int t = view.id(treatment);
    view.id(outcome);

    std::vector<std::string> candidates;
    const std::vector<bool> desc = view.descendants(t);
    for (std::size_t v = 0; v < view.names.size(); ++v) {
        const std::string& name = view.names[v];
        if (name == treatment || name == outcome || desc[v]) continue;
        candidates.push_back(name);
    }
    std::sort(candidates.begin(), candidates.end());

    const std::size_t m = candidates.size();
    for (std::size_t k = 0; k <= m; ++k) {
        // k-combinations in lexicographic order over the sorted candidates
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::set<std::string> z;
            for (std::size_t i : pick) z.insert(candidates[i]);
            if (satisfies_backdoor(dag, treatment, outcome, z)) return z;
            if (k == 0) break;
            // advance combination
            std::size_t i = k;
            while (i > 0) {
                --i;
                if (pick[i] != i + m - k) {
                    ++pick[i];
                    for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                    break;
                }
                if (i == 0) { i = k + 1; break; }
            }
            if (i == k + 1 || k == 0) break;
        }
    }
    return std::nullopt;
}

}  // namespace pmbench
