#pragma once

#include "homcw/graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace homcw {

enum class NodeKind : std::uint8_t { intro, unite, relabel, join };

/// One operation of a k-expression.
///   intro:   label `a`, vertex index `left`
///   unite:   children `left`, `right`
///   relabel: a -> b on child `left`
///   join:    edges between classes a and b of child `left`
struct ExprNode {
    NodeKind kind;
    int a = 0;
    int b = 0;
    int left = -1;
    int right = -1;
};

/// A clique-width expression stored as an arena. Children always have a
/// smaller index than their parent, so index order is a valid bottom-up
/// processing order.
class KExpression {
public:
    int intro(int label, std::string vertex_id);
    int unite(int left, int right);
    int relabel(int from, int to, int child);
    int join(int i, int j, int child);

    void set_root(int node) { root_ = node; }
    int root() const noexcept { return root_; }
    bool empty() const noexcept { return root_ < 0; }

    std::size_t size() const noexcept { return nodes_.size(); }
    const ExprNode& node(int idx) const { return nodes_[static_cast<std::size_t>(idx)]; }
    const std::vector<ExprNode>& nodes() const noexcept { return nodes_; }

    int vertex_count() const noexcept { return static_cast<int>(vertex_ids_.size()); }
    const std::string& vertex_id(int v) const { return vertex_ids_[static_cast<std::size_t>(v)]; }
    const std::vector<std::string>& vertex_ids() const noexcept { return vertex_ids_; }

    /// Byte offset of a node in the source text; only set by the parser.
    std::optional<std::uint32_t> source_offset(int idx) const;

    /// Number of distinct labels used anywhere in the expression.
    int width() const;
    int max_label() const;
    std::vector<int> labels_used() const;

    /// Checks the tree shape, unique introductions, label ranges and i != j.
    /// Throws Error describing the first violation.
    void validate() const;

    void reserve(std::size_t nodes) { nodes_.reserve(nodes); }

private:
    friend KExpression parse_kexpr(std::string_view text);

    std::vector<ExprNode> nodes_;
    std::vector<std::string> vertex_ids_;
    std::vector<std::uint32_t> offsets_;
    int root_ = -1;
};

/// Accepts the grammar
///   expr := "v(" INT "," ID ")" | "(" expr "+" expr ")"
///         | "r(" INT "->" INT "){" expr "}" | "e(" INT "," INT "){" expr "}"
/// with arbitrary whitespace and `#` line comments. Deep nesting is fine;
/// the parser does not recurse.
KExpression parse_kexpr(std::string_view text);
std::string print_kexpr(const KExpression& expr);
KExpression read_kexpr_file(const std::string& path);
void write_kexpr_file(const KExpression& expr, const std::string& path);

struct LabeledGraph {
    Graph graph;
    /// Indexed like graph vertices (which follow the expression's introduction order).
    std::vector<int> label_of;

    std::vector<int> class_of(int label) const;
};

LabeledGraph evaluate(const KExpression& expr, std::string graph_name = "G");

/// Live labels per node: label i is live at node t when some vertex carrying
/// label i at t still misses an edge of the final graph.
struct LivenessAnnotation {
    std::vector<std::vector<int>> live; // sorted, indexed by node
    LabeledGraph final_graph;
};

LivenessAnnotation annotate_liveness(const KExpression& expr);

/// One label per vertex; each vertex is joined to its earlier neighbors right
/// after it is introduced. Width equals the vertex count.
KExpression trivial_expression(const Graph& g);

/// Same visiting scheme, but finished vertices move to a shared label 1 and
/// their labels are recycled. Width is 1 + the largest number of unfinished
/// vertices alive at once. `order` defaults to the vertex order.
KExpression sequential_expression(const Graph& g, std::vector<int> order = {});

/// Width-2 expression for K_n (n >= 1).
KExpression clique_expression(int n, std::string_view prefix = "");

/// Leaves 1..k, each alone on its own label, united with a hub on label
/// k+1 that is joined to every leaf. Width k+1, all labels live until the end.
KExpression star_expression(int leaves);

/// Random linear expression: each step introduces a vertex on a random label
/// and then performs random joins and relabels among `width` labels.
KExpression random_linear_expression(int vertices, int width, double join_probability, std::uint64_t seed);

/// Renames introduced vertices; ids missing from the map keep their name.
/// Throws Error when two vertices end up with the same id.
KExpression relabel_vertices(const KExpression& expr, const std::map<std::string, std::string>& renaming);

/// Drops every introduction of a vertex outside `keep`; the result defines
/// the induced subgraph on the kept vertices. Throws when nothing remains.
KExpression restrict_expression(const KExpression& expr, const std::vector<char>& keep);

/// Appends operations to a single growing expression: every new vertex is
/// united with everything built so far.
class LinearExpressionBuilder {
public:
    void add_vertex(int label, std::string id);
    void join(int i, int j);
    void relabel(int from, int to);
    /// Merges an independently built expression into the current one.
    void add_expression(const KExpression& other);

    bool empty() const noexcept { return current_ < 0; }
    KExpression finish() &&;
    const KExpression& peek() const noexcept { return expr_; }

private:
    KExpression expr_;
    int current_ = -1;
};

} // namespace homcw
