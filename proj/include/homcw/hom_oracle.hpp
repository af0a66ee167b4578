#pragma once

#include "homcw/graph.hpp"
#include "homcw/signatures.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace homcw {

/// Total or partial vertex map by index; -1 marks an unset entry.
using Mapping = std::vector<int>;

/// Prescribed images keyed by vertex id (G-vertex id -> H-vertex id).
using PartialMapping = std::map<std::string, std::string>;

/// Lines of the form `map <g-vertex> <h-vertex>`; `#` comments.
PartialMapping parse_partial_mapping(std::string_view text);
std::string serialize_partial_mapping(const PartialMapping& m);
PartialMapping read_partial_mapping_file(const std::string& path);
void write_partial_mapping_file(const PartialMapping& m, const std::string& path);

/// Index form of a partial mapping, sized g.order(). Throws Error when an id
/// is unknown on either side.
Mapping resolve_partial(const Graph& g, const Graph& h, const PartialMapping& m);
PartialMapping to_partial_mapping(const Graph& g, const Graph& h, const Mapping& m);

/// Largest target the search accepts (domains are single words).
inline constexpr int kMaxOracleTarget = 64;

bool is_homomorphism(const Graph& g, const Graph& h, const Mapping& m);

/// Backtracking with arc-consistency propagation. `prescribed` may be empty
/// or sized g.order() with -1 for free vertices.
std::optional<Mapping> find_homomorphism(const Graph& g, const Graph& h, std::span<const int> prescribed = {});
std::optional<Mapping> find_homomorphism(const Graph& g, const Graph& h, const PartialMapping& partial);
bool homomorphic(const Graph& g, const Graph& h);

struct Extensions {
    std::vector<Mapping> mappings; // lexicographic order
    bool truncated = false;
};

/// All extensions of `prescribed`, stopping once `cap` have been found.
Extensions enumerate_extensions(const Graph& g, const Graph& h, std::span<const int> prescribed, std::size_t cap);

struct CoreResult {
    Graph core;
    std::vector<int> core_vertices; // indices into the input, ascending
    Mapping retraction;             // input vertex -> core vertex index
};

inline constexpr int kMaxCoreInput = 24;

/// Repeatedly looks for a homomorphism into the graph minus one vertex.
CoreResult compute_core(const Graph& h);
bool is_core(const Graph& h);

/// Bipartite or looped: Hom(-, h) is polynomial.
bool is_trivial(const Graph& h);
bool incomparable(const Graph& g, const Graph& h);

/// The subset-enumeration definition of the signature family, ascending.
std::vector<VertexSet> brute_force_family(const Graph& h);

struct Factorization {
    Graph target;
    std::vector<Graph> factors;
    /// coords[v][f]: vertex index inside factors[f] of target vertex v.
    std::vector<std::vector<int>> coords;

    bool is_prime() const;
};

inline constexpr int kMaxFactorInput = 32;

/// Splits a connected non-bipartite target into prime factors by searching
/// grid bijections. A prime target comes back as [h, K1*].
Factorization factorize_prime(const Graph& h);
/// Checks coords against the edge relation of the product.
bool verify_factorization(const Factorization& f);

/// Treats a factorization as H1 x W, where W is the product of the remaining
/// factors (K1* when there are none).
struct SplitTarget {
    Graph h1;
    Graph w;
    Graph target;
    std::vector<int> to_target; // index x * |W| + y -> target vertex

    explicit SplitTarget(const Factorization& f);

    int vertex(int x, int y) const { return to_target[static_cast<std::size_t>(x * w.order() + y)]; }
    int h1_of(int target_vertex) const { return from_target[static_cast<std::size_t>(target_vertex)] / w.order(); }
    int w_of(int target_vertex) const { return from_target[static_cast<std::size_t>(target_vertex)] % w.order(); }

private:
    std::vector<int> from_target;
};

struct ProjectivityResult {
    bool projective = false;
    int ell = 0;
    std::size_t extension_count = 0;
    std::size_t projection_count = 0;
    bool truncated = false;
    std::optional<Mapping> counterexample;
    Graph product;
};

inline constexpr int kMaxProjectiveProduct = 2400;

/// Bounded check of H_i-projectivity: every homomorphism from the product
/// with factor i repeated ell times that fixes the diagonal must be a
/// coordinate projection. Only ell is checked, not every ell >= 2.
ProjectivityResult check_projective(const Factorization& f, int i, int ell, std::size_t cap = 100000);

} // namespace homcw
