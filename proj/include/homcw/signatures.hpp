#pragma once

#include "homcw/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace homcw {

/// Vertex subset of a target graph; bit v is vertex index v.
using VertexSet = std::uint64_t;

/// Largest target the signature machinery accepts (one machine word per set).
inline constexpr int kMaxTargetVertices = 63;

inline bool is_subset(VertexSet a, VertexSet b) noexcept { return (a & ~b) == 0; }
int set_size(VertexSet s) noexcept;
std::vector<int> set_members(VertexSet s);
/// "{1,2}" using the graph's vertex ids.
std::string format_set(const Graph& h, VertexSet s);

/// Common neighborhood of every vertex in `t`. The result may be empty.
/// Throws PreconditionError on an empty `t`.
VertexSet signature_of(const Graph& h, VertexSet t);

/// All vertices whose neighborhood contains `s` (the maximal witness when `s`
/// is a signature set).
VertexSet maximal_witness(const Graph& h, VertexSet s);

/// The family of nonempty signature sets of a target, in ascending bit-set
/// order. Indices into this order are what DP records store.
class SignatureFamily {
public:
    /// Seeds with the neighborhoods and closes under pairwise intersection.
    /// Throws CapExceeded when the target has more than kMaxTargetVertices.
    static SignatureFamily build(const Graph& h);

    const Graph& target() const noexcept { return target_; }
    std::size_t size() const noexcept { return sets_.size(); }
    const std::vector<VertexSet>& sets() const noexcept { return sets_; }
    VertexSet set(std::size_t idx) const { return sets_[idx]; }
    VertexSet witness(std::size_t idx) const { return witnesses_[idx]; }
    std::optional<std::size_t> index_of(VertexSet s) const;

    /// Family indices whose sets are contained in set(idx), ascending.
    const std::vector<std::uint32_t>& subsets_of(std::size_t idx) const { return subsets_[idx]; }
    /// Family indices whose sets are contained in N(u).
    std::vector<std::uint32_t> contained_in_neighborhood(int u) const;

private:
    Graph target_;
    std::vector<VertexSet> sets_;
    std::vector<VertexSet> witnesses_;
    std::vector<std::vector<std::uint32_t>> subsets_;
};

std::size_t signature_number(const Graph& h);

} // namespace homcw
