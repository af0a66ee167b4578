#include "homcw/signatures.hpp"

#include "homcw/error.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace homcw {

int set_size(VertexSet s) noexcept { return std::popcount(s); }

std::vector<int> set_members(VertexSet s) {
    std::vector<int> out;
    while (s) {
        out.push_back(std::countr_zero(s));
        s &= s - 1;
    }
    return out;
}

std::string format_set(const Graph& h, VertexSet s) {
    std::string out = "{";
    bool first = true;
    for (int v : set_members(s)) {
        if (!first) out += ",";
        out += h.vertex_id(v);
        first = false;
    }
    return out + "}";
}

VertexSet signature_of(const Graph& h, VertexSet t) {
    if (t == 0) throw PreconditionError("signature of an empty vertex set");
    VertexSet s = ~VertexSet{0};
    for (int v : set_members(t)) s &= h.neighbor_mask(v);
    return s;
}

VertexSet maximal_witness(const Graph& h, VertexSet s) {
    VertexSet m = 0;
    for (int v = 0; v < h.order(); ++v)
        if (is_subset(s, h.neighbor_mask(v))) m |= VertexSet{1} << v;
    return m;
}

SignatureFamily SignatureFamily::build(const Graph& h) {
    if (h.order() > kMaxTargetVertices)
        throw CapExceeded("signature family: target '" + h.name() + "' has " + std::to_string(h.order()) +
                          " vertices, cap is " + std::to_string(kMaxTargetVertices));
    SignatureFamily fam;
    fam.target_ = h;

    std::vector<VertexSet> generators;
    for (int v = 0; v < h.order(); ++v)
        if (h.neighbor_mask(v)) generators.push_back(h.neighbor_mask(v));
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());

    // Every S(T) is an intersection of generators, so closing the found sets
    // under intersection with a single generator reaches all of them.
    std::unordered_set<VertexSet> seen(generators.begin(), generators.end());
    std::vector<VertexSet> work(generators.begin(), generators.end());
    for (std::size_t head = 0; head < work.size(); ++head) {
        VertexSet cur = work[head];
        for (VertexSet g : generators) {
            VertexSet next = cur & g;
            if (next && seen.insert(next).second) work.push_back(next);
        }
    }
    fam.sets_.assign(seen.begin(), seen.end());
    std::sort(fam.sets_.begin(), fam.sets_.end());

    fam.witnesses_.reserve(fam.sets_.size());
    for (VertexSet s : fam.sets_) fam.witnesses_.push_back(maximal_witness(h, s));

    fam.subsets_.resize(fam.sets_.size());
    for (std::size_t i = 0; i < fam.sets_.size(); ++i)
        for (std::size_t j = 0; j < fam.sets_.size(); ++j)
            if (is_subset(fam.sets_[j], fam.sets_[i])) fam.subsets_[i].push_back(static_cast<std::uint32_t>(j));
    return fam;
}

std::optional<std::size_t> SignatureFamily::index_of(VertexSet s) const {
    auto it = std::lower_bound(sets_.begin(), sets_.end(), s);
    if (it == sets_.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - sets_.begin());
}

std::vector<std::uint32_t> SignatureFamily::contained_in_neighborhood(int u) const {
    std::vector<std::uint32_t> out;
    VertexSet nu = target_.neighbor_mask(u);
    for (std::size_t i = 0; i < sets_.size(); ++i)
        if (is_subset(sets_[i], nu)) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

std::size_t signature_number(const Graph& h) { return SignatureFamily::build(h).size(); }

} // namespace homcw
