#pragma once

// Directed acyclic graphs over named variables, plus the plain-text
// edge-list format ("parent -> child" per line, '#' comments) that lets
// users audit and override the bundled failure-mechanism graph without
// rebuilding.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pmbench/errors.hpp"

namespace pmbench {

class Dag {
public:
    void add_node(const std::string& name) {
        if (name.empty()) throw GraphError("node name may not be empty");
        if (std::find(nodes_.begin(), nodes_.end(), name) == nodes_.end()) {
            nodes_.push_back(name);
        }
    }

    // Endpoints may be undeclared at insertion time; validate_dag reports them.
    void add_edge(const std::string& parent, const std::string& child) {
        if (std::find(edges_.begin(), edges_.end(), std::make_pair(parent, child)) ==
            edges_.end()) {
            edges_.emplace_back(parent, child);
        }
    }

    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }

    bool has_node(const std::string& name) const {
        return std::find(nodes_.begin(), nodes_.end(), name) != nodes_.end();
    }

    static Dag from_edge_list(std::string_view text) {
        Dag dag;
        std::size_t pos = 0;
        int line_no = 0;
        while (pos <= text.size()) {
            const std::size_t nl = text.find('\n', pos);
            std::string line(nl == std::string_view::npos ? text.substr(pos)
                                                          : text.substr(pos, nl - pos));
            ++line_no;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
            };
            line = trim(line);
            if (!line.empty()) {
                const std::size_t arrow = line.find("->");
                if (arrow == std::string::npos) {
                    // a bare name declares an isolated node
                    if (line.find(' ') != std::string::npos) {
                        throw GraphError("line " + std::to_string(line_no) +
                                         ": expected \"parent -> child\", got \"" + line + "\"");
                    }
                    dag.add_node(line);
                } else {
                    const std::string parent = trim(line.substr(0, arrow));
                    const std::string child = trim(line.substr(arrow + 2));
                    if (parent.empty() || child.empty()) {
                        throw GraphError("line " + std::to_string(line_no) +
                                         ": edge needs both endpoints");
                    }
                    dag.add_node(parent);
                    dag.add_node(child);
                    dag.add_edge(parent, child);
                }
            }
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        return dag;
    }

    std::string to_edge_list() const {
        std::ostringstream out;
        std::set<std::string> with_edges;
        for (const auto& [p, c] : edges_) {
            out << p << " -> " << c << "\n";
            with_edges.insert(p);
            with_edges.insert(c);
        }
        for (const auto& n : nodes_) {
            if (!with_edges.count(n)) out << n << "\n";
        }
        return out.str();
    }

private:
    std::vector<std::string> nodes_;
    std::vector<std::pair<std::string, std::string>> edges_;
};

struct DagValidation {
    bool ok = false;
    std::vector<std::string> cycle;  // one offending node sequence when !ok

    std::string message() const {
        if (ok) return "ok";
        std::string msg = "cycle:";
        for (const auto& n : cycle) msg += " " + n;
        return msg;
    }
};

namespace detail {

// Index-based adjacency view used by every graph algorithm.
struct DagView {
    std::vector<std::string> names;
    std::map<std::string, int> index;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;

    explicit DagView(const Dag& dag) {
        names = dag.nodes();
        for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
        parents.resize(names.size());
        children.resize(names.size());
        for (const auto& [p, c] : dag.edges()) {
            const auto pi = index.find(p);
            const auto ci = index.find(c);
            if (pi == index.end()) throw GraphError("edge references undeclared node \"" + p + "\"");
            if (ci == index.end()) throw GraphError("edge references undeclared node \"" + c + "\"");
            children[pi->second].push_back(ci->second);
            parents[ci->second].push_back(pi->second);
        }
    }

    int id(const std::string& name) const {
        const auto it = index.find(name);
        if (it == index.end()) throw GraphError("unknown node \"" + name + "\"");
        return it->second;
    }

    std::vector<bool> descendants(int start) const {  // proper descendants
        std::vector<bool> seen(names.size(), false);
        std::vector<int> stack{start};
        std::vector<bool> visited(names.size(), false);
        visited[start] = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int c : children[v]) {
                if (!visited[c]) {
                    visited[c] = true;
                    seen[c] = true;
                    stack.push_back(c);
                }
            }
        }
        return seen;
    }
};

}  // namespace detail

// Topological-sort acyclicity check. Undeclared edge endpoints raise
// GraphError naming the offender; a cycle is returned, not thrown.
inline DagValidation validate_dag(const Dag& dag) {
    const detail::DagView view(dag);  // throws on dangling endpoints
    const std::size_t n = view.names.size();

    std::vector<int> indegree(n, 0);
    for (std::size_t v = 0; v < n; ++v) indegree[v] = static_cast<int>(view.parents[v].size());
    std::vector<int> queue;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) queue.push_back(static_cast<int>(v));
    }
    std::size_t processed = 0;
    while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        ++processed;
        for (int c : view.children[v]) {
            if (--indegree[c] == 0) queue.push_back(c);
        }
    }

    DagValidation result;
    if (processed == n) {
        result.ok = true;
        return result;
    }

    // walk the residual graph (nodes still holding indegree) to print one cycle
    int start = -1;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] > 0) { start = static_cast<int>(v); break; }
    }
    std::vector<int> path;
    std::vector<int> pos_in_path(n, -1);
    int cur = start;
    while (pos_in_path[cur] < 0) {
        pos_in_path[cur] = static_cast<int>(path.size());
        path.push_back(cur);
        for (int c : view.children[cur]) {
            if (indegree[c] > 0) { cur = c; break; }
        }
    }
    for (std::size_t i = pos_in_path[cur]; i < path.size(); ++i) {
        result.cycle.push_back(view.names[path[i]]);
    }
    return result;
}

// The failure-mechanism graph: exogenous sensor readings and machine type
// feed the physical stress variables, which drive failure. Rotational
// speed also enters the temperature differential (slow rotation impedes
// heat dissipation), and tool wear keeps a direct path to failure (wear-
// driven failures strike within a wear band regardless of derived loads).
inline Dag build_default_dag() {
    Dag dag;
    for (const char* n : {"air_temp", "process_temp", "rot_speed", "torque", "tool_wear",
                          "machine_type", "temp_diff", "power", "overstrain", "failure"}) {
        dag.add_node(n);
    }
    dag.add_edge("air_temp", "temp_diff");
    dag.add_edge("process_temp", "temp_diff");
    dag.add_edge("rot_speed", "temp_diff");
    dag.add_edge("torque", "power");
    dag.add_edge("rot_speed", "power");
    dag.add_edge("tool_wear", "overstrain");
    dag.add_edge("torque", "overstrain");
    dag.add_edge("machine_type", "overstrain");
    dag.add_edge("temp_diff", "failure");
    dag.add_edge("power", "failure");
    dag.add_edge("overstrain", "failure");
    dag.add_edge("tool_wear", "failure");
    return dag;
}

}  // namespace pmbench
