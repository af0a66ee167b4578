#pragma once

// Small, deliberately naive reference implementations used to cross-check
// the library. Nothing here shares code with src/.

#include "homcw/cwexpr.hpp"
#include "homcw/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using homcw::Graph;

inline std::vector<std::vector<char>> adjacency(const Graph& g) {
    std::vector<std::vector<char>> a(static_cast<std::size_t>(g.order()), std::vector<char>(static_cast<std::size_t>(g.order()), 0));
    for (auto [u, v] : g.edges()) a[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = a[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    return a;
}

// Plain backtracking in vertex order, no propagation. Counts up to `cap`.
inline std::uint64_t count_homs(const Graph& g, const Graph& h, const std::vector<int>& prescribed = {},
                                std::uint64_t cap = UINT64_MAX) {
    auto ag = adjacency(g), ah = adjacency(h);
    const int n = g.order();
    std::vector<int> img(static_cast<std::size_t>(n), -1);
    std::uint64_t count = 0;
    auto rec = [&](auto&& self, int v) -> void {
        if (count >= cap) return;
        if (v == n) {
            ++count;
            return;
        }
        for (int x = 0; x < h.order(); ++x) {
            if (!prescribed.empty() && prescribed[static_cast<std::size_t>(v)] >= 0 && prescribed[static_cast<std::size_t>(v)] != x) continue;
            bool ok = true;
            for (int u = 0; u <= v && ok; ++u) {
                if (!ag[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) continue;
                int y = u == v ? x : img[static_cast<std::size_t>(u)];
                ok = ah[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
            }
            if (!ok) continue;
            img[static_cast<std::size_t>(v)] = x;
            self(self, v + 1);
        }
        img[static_cast<std::size_t>(v)] = -1;
    };
    rec(rec, 0);
    return count;
}

inline bool hom_exists(const Graph& g, const Graph& h, const std::vector<int>& prescribed = {}) {
    return count_homs(g, h, prescribed, 1) > 0;
}

// Every nonempty common neighborhood of a nonempty vertex subset.
inline std::set<std::uint64_t> subset_family(const Graph& h) {
    std::set<std::uint64_t> out;
    const int n = h.order();
    auto a = adjacency(h);
    for (std::uint64_t t = 1; t < (std::uint64_t{1} << n); ++t) {
        std::uint64_t s = 0;
        for (int x = 0; x < n; ++x) {
            bool all = true;
            for (int v = 0; v < n && all; ++v)
                if ((t >> v) & 1) all = a[static_cast<std::size_t>(v)][static_cast<std::size_t>(x)];
            if (all) s |= std::uint64_t{1} << x;
        }
        if (s) out.insert(s);
    }
    return out;
}

// Direct recursive-free evaluation: label per vertex and an edge set by id.
struct NaiveGraph {
    std::set<std::string> vertices;
    std::set<std::pair<std::string, std::string>> edges;
};

inline NaiveGraph naive_evaluate(const homcw::KExpression& e) {
    std::vector<std::vector<std::pair<int, int>>> members(e.size()); // (vertex, label)
    std::set<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& nd = e.node(static_cast<int>(i));
        auto& m = members[i];
        switch (nd.kind) {
        case homcw::NodeKind::intro:
            m = {{nd.left, nd.a}};
            break;
        case homcw::NodeKind::unite:
            m = members[static_cast<std::size_t>(nd.left)];
            m.insert(m.end(), members[static_cast<std::size_t>(nd.right)].begin(), members[static_cast<std::size_t>(nd.right)].end());
            break;
        case homcw::NodeKind::relabel:
            m = members[static_cast<std::size_t>(nd.left)];
            for (auto& [v, l] : m)
                if (l == nd.a) l = nd.b;
            break;
        case homcw::NodeKind::join:
            m = members[static_cast<std::size_t>(nd.left)];
            for (auto [u, lu] : m)
                for (auto [v, lv] : m)
                    if (lu == nd.a && lv == nd.b) edges.emplace(std::min(u, v), std::max(u, v));
            break;
        }
    }
    NaiveGraph out;
    for (auto [v, l] : members[static_cast<std::size_t>(e.root())]) out.vertices.insert(e.vertex_id(v));
    for (auto [u, v] : edges) {
        auto a = e.vertex_id(u), b = e.vertex_id(v);
        out.edges.emplace(std::min(a, b), std::max(a, b));
    }
    return out;
}

inline NaiveGraph naive_of(const Graph& g) {
    NaiveGraph out;
    for (const auto& id : g.vertex_ids()) out.vertices.insert(id);
    for (auto [u, v] : g.edges()) {
        auto a = g.vertex_id(u), b = g.vertex_id(v);
        out.edges.emplace(std::min(a, b), std::max(a, b));
    }
    return out;
}

inline Graph random_graph(int n, double p, std::mt19937_64& rng, const std::string& name = "R") {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("u" + std::to_string(i));
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    return Graph::from_edges(name, ids, edges);
}

inline bool connected(const Graph& g) {
    if (g.order() == 0) return true;
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : g.neighbors(v))
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++count;
                stack.push_back(u);
            }
    }
    return count == g.order();
}

inline bool has_odd_cycle(const Graph& g) { return !hom_exists(g, Graph::from_edges("K2", {"0", "1"}, std::vector<std::pair<int, int>>{{0, 1}})); }

inline Graph random_connected_nonbipartite(int max_n, std::mt19937_64& rng, const std::string& name) {
    std::uniform_int_distribution<int> size(3, max_n);
    while (true) {
        Graph g = random_graph(size(rng), 0.6, rng, name);
        if (connected(g) && has_odd_cycle(g)) return g;
    }
}

} // namespace oracle
