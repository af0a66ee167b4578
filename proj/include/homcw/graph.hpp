#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace homcw {

/// Finite undirected graph with set-semantics edges. Loops are representable
/// only when the graph was created with `loops_allowed`; a loop at v puts v in
/// its own neighborhood. Vertices are addressed by dense indices in insertion
/// order; each carries a unique string id.
class Graph {
public:
    explicit Graph(std::string name = "G", bool loops_allowed = false);

    /// Builds a graph in one pass. Duplicate edges are merged.
    static Graph from_edges(std::string name, std::vector<std::string> vertex_ids,
                            std::span<const std::pair<int, int>> edges, bool loops_allowed = false);

    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    bool loops_allowed() const noexcept { return loops_allowed_; }

    int order() const noexcept { return static_cast<int>(ids_.size()); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Throws Error on a duplicate id.
    int add_vertex(std::string id);
    /// Returns false when the edge already existed. Throws on a loop in a
    /// loopless graph or on an out-of-range index.
    bool add_edge(int u, int v);

    bool has_edge(int u, int v) const;
    bool has_loop(int v) const { return has_edge(v, v); }
    /// Sorted neighbor list; includes v itself when v has a loop.
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

    /// Neighborhood as a bit set; only available while order() <= 64.
    std::uint64_t neighbor_mask(int v) const;
    bool has_masks() const noexcept { return !masks_.empty() || ids_.empty(); }

    const std::string& vertex_id(int v) const { return ids_[static_cast<std::size_t>(v)]; }
    const std::vector<std::string>& vertex_ids() const noexcept { return ids_; }
    std::optional<int> find_vertex(std::string_view id) const;
    /// Throws Error when the id is unknown.
    int vertex(std::string_view id) const;

    /// Every edge once, as (u, v) with u <= v, sorted.
    std::vector<std::pair<int, int>> edges() const;

    friend bool operator==(const Graph& a, const Graph& b);

private:
    void rebuild_masks();

    std::string name_;
    bool loops_allowed_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::uint64_t> masks_;
    std::size_t edge_count_ = 0;
};

/// Parses the line-based graph format:
///   graph <name> <simple|loops>
///   v <id> ...
///   e <id> <id> ...
/// `#` starts a comment. Errors carry the offending line.
Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& g);
Graph read_graph_file(const std::string& path);
void write_graph_file(const Graph& g, const std::string& path);

bool is_valid_vertex_id(std::string_view id);

/// Direct (tensor) product. Vertex ids are the dot-joined coordinate ids;
/// nested products are flattened because ids are simply concatenated.
Graph direct_product(std::span<const Graph> factors);
Graph direct_product(const Graph& a, const Graph& b);

bool has_loop(const Graph& g);
bool is_bipartite(const Graph& g);
bool is_connected(const Graph& g);
/// Vertex index sets of the components, each sorted, ordered by smallest vertex.
std::vector<std::vector<int>> component_vertex_sets(const Graph& g);
std::vector<Graph> connected_components(const Graph& g);
bool is_ramified(const Graph& g);
/// Throws Error on an out-of-range index. Keeps the original vertex order.
Graph induced_subgraph(const Graph& g, std::span<const int> keep);
Graph induced_subgraph_by_id(const Graph& g, std::span<const std::string> keep);

/// Same vertex ids and the same edges between them; vertex order and graph
/// names are ignored.
bool same_vertices_and_edges(const Graph& a, const Graph& b);

/// Backtracking isomorphism search with degree and neighbor-degree pruning.
/// Returns mapping[a-vertex] = b-vertex. Intended for small graphs.
std::optional<std::vector<int>> find_isomorphism(const Graph& a, const Graph& b);
bool are_isomorphic(const Graph& a, const Graph& b);

namespace named {
Graph complete(int c);
Graph cycle(int n);
/// Hub "0" plus rim "1".."n".
Graph wheel(int n);
Graph path(int n);
Graph edgeless(int n);
/// Single vertex "l" with a loop.
Graph loop_vertex();
} // namespace named

} // namespace homcw
