#pragma once

// Independent reference implementations used only by tests: brute-force
// path enumeration for d-separation/backdoor queries and an exhaustive
// grid scan for the threshold optimizer. These deliberately avoid the
// library's algorithms (reachability sets, incremental counting) so the
// two routes can disagree.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pmbench/causal/dag.hpp"
#include "pmbench/costmodel.hpp"
#include "pmbench/rng.hpp"

namespace testsupport {

struct EdgeGraph {
    std::vector<std::string> names;
    std::map<std::string, int> index;
    std::vector<std::vector<int>> out;  // directed children
    std::vector<std::vector<int>> in;   // directed parents

    explicit EdgeGraph(const pmbench::Dag& dag) {
        names = dag.nodes();
        for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
        out.resize(names.size());
        in.resize(names.size());
        for (const auto& [p, c] : dag.edges()) {
            out[index.at(p)].push_back(index.at(c));
            in[index.at(c)].push_back(index.at(p));
        }
    }

    std::set<int> descendants(int v) const {  // proper descendants
        std::set<int> seen;
        std::vector<int> stack{v};
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int c : out[u]) {
                if (!seen.count(c)) {
                    seen.insert(c);
                    stack.push_back(c);
                }
            }
        }
        return seen;
    }
};

// One undirected step of a path with its direction: true when the edge is
// oriented along the walk (from -> to), false when against it.
struct PathStep {
    int node;
    bool forward;
};

inline void enumerate_paths(const EdgeGraph& g, int current, int target,
                            std::vector<PathStep>& path, std::vector<bool>& visited,
                            std::vector<std::vector<PathStep>>& found) {
    if (current == target) {
        found.push_back(path);
        return;
    }
    for (int c : g.out[current]) {
        if (!visited[c]) {
            visited[c] = true;
            path.push_back({c, true});
            enumerate_paths(g, c, target, path, visited, found);
            path.pop_back();
            visited[c] = false;
        }
    }
    for (int p : g.in[current]) {
        if (!visited[p]) {
            visited[p] = true;
            path.push_back({p, false});
            enumerate_paths(g, p, target, path, visited, found);
            path.pop_back();
            visited[p] = false;
        }
    }
}

inline std::vector<std::vector<PathStep>> all_undirected_paths(const EdgeGraph& g, int x, int y) {
    std::vector<std::vector<PathStep>> found;
    std::vector<PathStep> path{{x, true}};
    std::vector<bool> visited(g.names.size(), false);
    visited[x] = true;
    enumerate_paths(g, x, y, path, visited, found);
    return found;
}

// Chain/fork/collider blocking over an explicit path. path[k].forward says
// whether the edge between node k-1 and node k points toward node k.
inline bool path_active(const EdgeGraph& g, const std::vector<PathStep>& path,
                        const std::set<int>& z) {
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        // previous edge points into path[k] when path[k].forward; the next
        // edge points into path[k] when the walk goes against it
        const bool is_collider = path[k].forward && !path[k + 1].forward;
        if (is_collider) {
            bool opened = z.count(path[k].node) > 0;
            if (!opened) {
                for (int d : g.descendants(path[k].node)) {
                    if (z.count(d)) { opened = true; break; }
                }
            }
            if (!opened) return false;
        } else {
            if (z.count(path[k].node)) return false;
        }
    }
    return true;
}

inline bool d_separated_oracle(const pmbench::Dag& dag, const std::string& x,
                               const std::string& y, const std::set<std::string>& z) {
    const EdgeGraph g(dag);
    std::set<int> zi;
    for (const auto& n : z) zi.insert(g.index.at(n));
    for (const auto& path : all_undirected_paths(g, g.index.at(x), g.index.at(y))) {
        if (path_active(g, path, zi)) return false;
    }
    return true;
}

inline bool backdoor_oracle(const pmbench::Dag& dag, const std::string& treatment,
                            const std::string& outcome, const std::set<std::string>& z) {
    const EdgeGraph g(dag);
    const int t = g.index.at(treatment);
    const int o = g.index.at(outcome);
    const std::set<int> desc = g.descendants(t);
    std::set<int> zi;
    for (const auto& n : z) {
        const int id = g.index.at(n);
        if (desc.count(id)) return false;
        zi.insert(id);
    }
    for (const auto& path : all_undirected_paths(g, t, o)) {
        if (path.size() < 2) continue;
        if (path[1].forward) continue;  // starts with an edge out of the treatment
        if (path_active(g, path, zi)) return false;
    }
    return true;
}

// Random DAG on `n` ordered nodes: each forward pair (i, j), i < j, gets an
// edge with the given probability, so acyclicity holds by construction.
inline pmbench::Dag random_dag(pmbench::Rng& rng, int n, double edge_prob = 0.4) {
    pmbench::Dag dag;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
        names.push_back("n" + std::to_string(i));
        dag.add_node(names.back());
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform01() < edge_prob) dag.add_edge(names[i], names[j]);
        }
    }
    return dag;
}

// Exhaustive scan of the threshold grid, recounting from scratch at every
// point; returns the minimum achievable cost.
inline std::int64_t min_grid_cost_oracle(const std::vector<double>& scores,
                                         const std::vector<int>& labels,
                                         const pmbench::CostSchedule& schedule) {
    std::int64_t best = -1;
    for (int k = 0; k < 99; ++k) {
        const double t = 0.01 + 0.01 * k;
        std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= t) {
                (labels[i] ? tp : fp) += 1;
            } else {
                (labels[i] ? fn : tn) += 1;
            }
        }
        const std::int64_t cost =
            tp * schedule.tp_cost + fp * schedule.fp_cost + fn * schedule.fn_cost + tn * schedule.tn_cost;
        if (best < 0 || cost < best) best = cost;
    }
    return best;
}

}  // namespace testsupport
