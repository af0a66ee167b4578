#pragma once

#include "homcw/cwexpr.hpp"
#include "homcw/graph.hpp"
#include "homcw/hom_oracle.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace homcw {

using VertexPair = std::pair<int, int>; // H1 vertex indices

/// A graph with prescribed images into the target and its distinguished
/// vertices: (p, q) for S-gadgets, `roots` for or-gadgets.
struct GadgetInstance {
    std::string kind; // "s", "implication" or "or"
    Graph graph;
    Mapping partial; // graph vertex -> target vertex, -1 when free
    int p = -1;
    int q = -1;
    std::vector<int> roots;

    // parameters
    std::vector<VertexPair> pairs;
    int w = -1;
    int w_prime = -1;
    int a = -1, b = -1, c = -1;
    int t = 0;

    /// For S-gadgets: graph vertex -> coordinate tuple (H1^ell then W).
    std::vector<std::vector<int>> coords;
    /// For or-gadgets: the S-gadgets of the chain and, per chain link,
    /// the graph vertex of each of their vertices.
    std::vector<GadgetInstance> links;
    std::vector<std::vector<int>> link_vertex;
};

/// F = H1^|S| x W with every diagonal vertex fixed. Throws on an empty S or
/// vertices outside H1 / W.
GadgetInstance s_gadget(const SplitTarget& target, const std::vector<VertexPair>& pairs, int w, int w_prime);
GadgetInstance s_gadget(const Factorization& f, const std::vector<VertexPair>& pairs, int w, int w_prime);

/// S_{a,b} = {(a', b') : a' != a} plus (a, b), in lexicographic order.
std::vector<VertexPair> implication_pairs(int h1_order, int a, int b);
GadgetInstance implication_gadget(const SplitTarget& target, int a, int b, int w, int w_prime);
GadgetInstance implication_gadget(const Factorization& f, int a, int b, int w, int w_prime);

/// The relations chained together by the or-gadget for t >= 3.
std::vector<VertexPair> or_left_pairs(int a, int b, int c);
std::vector<VertexPair> or_middle_pairs(int a, int b, int c);
std::vector<VertexPair> or_right_pairs(int a, int b, int c);
GadgetInstance or_gadget(const SplitTarget& target, int a, int b, int c, int w, int t);
GadgetInstance or_gadget(const Factorization& f, int a, int b, int c, int w, int t);

struct SGadgetCheck {
    bool s1 = false; // every extension lands (h1(p), h1(q)) in S
    bool s2 = false; // every pair of S is realized with (w, w')
    std::size_t extensions = 0;
    bool truncated = false;
    std::vector<VertexPair> observed; // distinct (h1(p), h1(q)) images
};
SGadgetCheck verify_s_gadget(const SplitTarget& target, const GadgetInstance& gadget, std::size_t cap = 1'000'000);

struct OrGadgetCheck {
    bool o1 = false;
    bool o2 = false;
    std::size_t extensions = 0;
    bool truncated = false;
};
OrGadgetCheck verify_or_gadget(const SplitTarget& target, const GadgetInstance& gadget, std::size_t cap = 1'000'000);

struct CSPConstraint {
    std::vector<int> vars; // 0-based variable indices
    std::vector<std::vector<int>> allowed; // values in 1..B
};

struct CSPInstance {
    int n = 0;
    int domain = 0; // B
    std::vector<CSPConstraint> constraints;

    int arity() const; // largest constraint arity (q)
    bool satisfied_by(const std::vector<int>& assignment) const;
    /// Exhaustive search; only for tiny instances.
    std::optional<std::vector<int>> brute_force_solution() const;
};

/// `csp <n> <B>`, then per constraint `constraint x<i> ...` followed by its
/// `allow v ...` lines. Variables are numbered from 1.
CSPInstance parse_csp(std::string_view text);
std::string serialize_csp(const CSPInstance& csp);
CSPInstance read_csp_file(const std::string& path);

/// Output of homext_to_hom: G' plus a copy of H.
struct HomInstance {
    Graph graph;
    std::vector<int> hat_vertex; // target vertex -> graph vertex of its copy
    std::optional<KExpression> expr;
    std::string expr_strategy; // "root-join", "spine" or "split-labels"
};

/// Requires a non-trivial core target. Copies of H get fresh ids.
HomInstance homext_to_hom(const Graph& g, const Mapping& partial, const Graph& h, const KExpression* expr = nullptr);

struct ReductionOptions {
    std::optional<int> blocks_override;
    bool to_hom = false;
};

/// Bookkeeping that lets the forward witness be rebuilt and checked.
struct PlacedGadget {
    std::size_t template_index = 0; // into ReductionOutput::templates
    std::vector<int> vertex_of;     // gadget vertex -> reduction graph vertex
};

struct IncidenceSets {
    int block = 0;
    int var = 0;
    int tuple = 0; // k, 0-based
    int value = 0; // y in 1..B
    std::vector<int> v_set, u_set;          // graph vertices
    std::vector<int> v_designated, u_designated; // H1 vertex per member
};

struct ReductionMeta {
    int n = 0;
    int m = 0;
    int domain = 0;
    int arity = 0;
    int blocks = 0;
    int full_blocks = 0;
    bool forward_only = false;
    bool empty_constraint = false;
    bool to_hom = false;
    int a = -1, b = -1, c = -1, w = -1, w_prime = -1;
    std::vector<VertexSet> lambda; // lambda[y-1]
    int main_labels = 0;
    int done_labels = 0;
    int constraint_work_labels = 0;
    int incidence_work_labels = 0; // all positions together
    int hom_labels = 0;            // copy of H when wrapped
};

struct ReductionOutput {
    CSPInstance csp;
    Factorization factors;
    Graph target;
    Graph graph;
    Mapping partial; // prescriptions of the extension instance; copies of H stay free
    KExpression expr;
    ReductionMeta meta;

    // structure of the extension instance (before any wrapping)
    std::vector<std::vector<int>> block_roots;
    std::vector<GadgetInstance> templates;
    std::vector<PlacedGadget> gadgets; // or-gadgets and implication gadgets, in construction order
    std::vector<IncidenceSets> incidences;
    std::vector<int> hat_vertex; // set when wrapped
};

ReductionOutput reduce_csp(const CSPInstance& csp, const Factorization& f, const ReductionOptions& options = {});

/// The homomorphism from the forward direction of the reduction, checked
/// edge by edge. Throws PreconditionError when the assignment (1..B values)
/// violates a constraint.
Mapping build_forward_witness(const ReductionOutput& reduction, const std::vector<int>& assignment);

} // namespace homcw
