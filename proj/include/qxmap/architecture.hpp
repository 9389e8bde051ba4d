#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace qxmap {

// Directed interaction graph of a device: (i, j) means a CNOT with control i
// and target j can be applied natively.
struct CouplingMap {
    std::string name;
    int num_physical = 0;
    std::set<std::pair<int, int>> edges;

    bool has_edge(int control, int target) const {
        return edges.count({control, target}) > 0;
    }

    bool has_undirected(int a, int b) const {
        return has_edge(a, b) || has_edge(b, a);
    }

    // Undirected edge set with a < b, sorted.
    std::vector<std::pair<int, int>> undirected_edges() const {
        std::set<std::pair<int, int>> und;
        for (const auto& [a, b] : edges) und.emplace(std::min(a, b), std::max(a, b));
        return {und.begin(), und.end()};
    }

    std::vector<std::vector<int>> undirected_adjacency() const {
        std::vector<std::vector<int>> adj(num_physical);
        for (const auto& [a, b] : undirected_edges()) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        for (auto& v : adj) std::sort(v.begin(), v.end());
        return adj;
    }

    bool operator==(const CouplingMap& other) const {
        return num_physical == other.num_physical && edges == other.edges;
    }
};

inline void validate_coupling_map(const CouplingMap& cm) {
    if (cm.num_physical <= 0) throw std::invalid_argument("coupling map needs at least one qubit");
    for (const auto& [a, b] : cm.edges) {
        if (a == b)
            throw std::invalid_argument("coupling map has a self-loop at qubit " +
                                        std::to_string(a));
        if (a < 0 || b < 0 || a >= cm.num_physical || b >= cm.num_physical)
            throw std::invalid_argument("coupling map edge (" + std::to_string(a) + "," +
                                        std::to_string(b) + ") out of range");
    }
}

// The 5-qubit IBM QX4 device. Edges are stored 0-indexed; the device
// documentation names the qubits p1..p5.
inline CouplingMap builtin_qx4() {
    CouplingMap cm;
    cm.name = "ibm-qx4";
    cm.num_physical = 5;
    cm.edges = {{1, 0}, {2, 0}, {2, 1}, {3, 2}, {3, 4}, {4, 2}};
    return cm;
}

// JSON schema: {"name": str, "qubits": int, "edges": [[c,t], ...]}.
inline CouplingMap load_coupling_map(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed coupling map JSON: ") + e.what());
    }
    CouplingMap cm;
    try {
        cm.name = j.at("name").get<std::string>();
        cm.num_physical = j.at("qubits").get<int>();
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("coupling map edge must be a pair");
            cm.edges.emplace(e[0].get<int>(), e[1].get<int>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed coupling map JSON: ") + e.what());
    }
    validate_coupling_map(cm);
    return cm;
}

inline std::string coupling_map_to_json(const CouplingMap& cm) {
    nlohmann::json j;
    j["name"] = cm.name;
    j["qubits"] = cm.num_physical;
    auto edges = nlohmann::json::array();
    for (const auto& [a, b] : cm.edges) edges.push_back({a, b});
    j["edges"] = edges;
    return j.dump(2);
}

namespace detail {

inline bool subset_connected(const std::vector<std::vector<int>>& adj,
                             const std::vector<int>& subset) {
    if (subset.empty()) return false;
    std::set<int> members(subset.begin(), subset.end());
    std::vector<int> stack{subset.front()};
    std::set<int> seen{subset.front()};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (members.count(w) && !seen.count(w)) {
                seen.insert(w);
                stack.push_back(w);
            }
        }
    }
    return seen.size() == members.size();
}

}  // namespace detail

// All size-n subsets of physical qubits whose induced undirected subgraph is
// connected, in lexicographic order.
inline std::vector<std::vector<int>> connected_subsets(const CouplingMap& cm, int n) {
    if (n < 1 || n > cm.num_physical)
        throw std::invalid_argument("subset size must be in [1, qubits]");
    const auto adj = cm.undirected_adjacency();
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    auto recurse = [&](auto&& self, int next) -> void {
        if (static_cast<int>(current.size()) == n) {
            if (detail::subset_connected(adj, current)) out.push_back(current);
            return;
        }
        int needed = n - static_cast<int>(current.size());
        for (int v = next; v + needed <= cm.num_physical; ++v) {
            current.push_back(v);
            self(self, v + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 0);
    return out;
}

}  // namespace qxmap
