#pragma once

#include "homcw/cwexpr.hpp"
#include "homcw/graph.hpp"
#include "homcw/hom_oracle.hpp"
#include "homcw/signatures.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace homcw {

/// P_tau: a deduplicated set of functions from the sorted live labels to
/// family indices, stored row-major with one row per record.
class RecordTable {
public:
    RecordTable() = default;
    explicit RecordTable(std::vector<int> labels);

    const std::vector<int>& labels() const noexcept { return labels_; }
    std::size_t stride() const noexcept { return labels_.size(); }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }

    std::span<const std::uint32_t> record(std::size_t r) const {
        return {data_.data() + r * stride(), stride()};
    }
    /// Column of `label`, or -1 when it is not a key.
    int position(int label) const;

    /// Returns false when the record was already present.
    bool insert(std::span<const std::uint32_t> rec);
    bool contains(std::span<const std::uint32_t> rec) const { return find(rec).has_value(); }
    /// Row index of `rec` if present.
    std::optional<std::size_t> find(std::span<const std::uint32_t> rec) const;

    /// Records in lexicographic order (for tests and printing).
    std::vector<std::vector<std::uint32_t>> sorted_records() const;

private:
    std::uint64_t hash(std::span<const std::uint32_t> rec) const;
    bool equal(std::size_t r, std::span<const std::uint32_t> rec) const;
    std::size_t find_slot(std::span<const std::uint32_t> rec, std::uint64_t hv) const;
    void grow();

    std::vector<int> labels_;
    std::vector<std::uint32_t> data_;
    std::size_t count_ = 0;
    std::vector<std::uint32_t> slots_;
};

/// Single record-table steps. `prescribed` restricts the introduced vertex
/// to one image; `live` tells whether the vertex still needs edges.
RecordTable dp_intro(int label, const SignatureFamily& family, std::optional<int> prescribed = std::nullopt,
                     bool live = true);
RecordTable dp_relabel(int i, int j, const RecordTable& child);
RecordTable dp_union(const RecordTable& left, const RecordTable& right);
/// `live_after` is L_tau of the join node.
RecordTable dp_join(int i, int j, const RecordTable& child, const SignatureFamily& family,
                    std::span<const int> live_after);

struct NodeStat {
    std::uint32_t records = 0;
    std::uint32_t live = 0;
};

struct SolveOptions {
    bool split_components = true;
    /// Attach an oracle witness to yes answers when G has at most this many vertices.
    int witness_limit = 0;
};

struct SolveReport {
    bool answer = false;
    std::string method; // "dp", "polynomial" or "factors"
    int width = 0;
    std::size_t signature_number = 0;
    std::size_t peak_records = 0;
    bool bound_ok = true;
    int components = 0;
    double wall_time_ms = 0;
    std::vector<NodeStat> node_stats; // processing order, all components
    std::optional<Mapping> witness;
    std::vector<std::string> notes;
};

/// Runs the signature-set DP. `prescribed` is indexed like the expression's
/// vertices; an empty span means plain Hom.
SolveReport solve(const KExpression& expr, const Graph& h, std::span<const int> prescribed,
                  const SolveOptions& options = {});
SolveReport solve(const KExpression& expr, const Graph& h, const PartialMapping& partial,
                  const SolveOptions& options = {});

SolveReport solve(const KExpression& expr, const Graph& h, const SolveOptions& options = {});

/// Reduces the target to its core and prime factors and solves each factor.
/// Trivial targets are answered without running the DP.
SolveReport solve_via_factors(const KExpression& expr, const Graph& target, const SolveOptions& options = {});

} // namespace homcw
