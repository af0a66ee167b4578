#include "homcw/dp_solver.hpp"

#include "homcw/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace homcw {

namespace {
constexpr std::uint32_t kEmptySlot = std::numeric_limits<std::uint32_t>::max();
}

// ---------------------------------------------------------------------------
// record tables

RecordTable::RecordTable(std::vector<int> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
}

int RecordTable::position(int label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) return -1;
    return static_cast<int>(it - labels_.begin());
}

std::uint64_t RecordTable::hash(std::span<const std::uint32_t> rec) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint32_t x : rec) {
        h ^= x;
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    }
    return h;
}

bool RecordTable::equal(std::size_t r, std::span<const std::uint32_t> rec) const {
    return std::equal(rec.begin(), rec.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * stride()));
}

std::size_t RecordTable::find_slot(std::span<const std::uint32_t> rec, std::uint64_t hv) const {
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = static_cast<std::size_t>(hv) & mask;
    while (slots_[s] != kEmptySlot && !equal(slots_[s], rec)) s = (s + 1) & mask;
    return s;
}

void RecordTable::grow() {
    std::size_t cap = slots_.empty() ? 16 : slots_.size() * 2;
    slots_.assign(cap, kEmptySlot);
    for (std::size_t r = 0; r < count_; ++r) {
        auto rec = record(r);
        slots_[find_slot(rec, hash(rec))] = static_cast<std::uint32_t>(r);
    }
}

bool RecordTable::insert(std::span<const std::uint32_t> rec) {
    if ((count_ + 1) * 2 > slots_.size()) grow();
    std::size_t s = find_slot(rec, hash(rec));
    if (slots_[s] != kEmptySlot) return false;
    slots_[s] = static_cast<std::uint32_t>(count_);
    data_.insert(data_.end(), rec.begin(), rec.end());
    ++count_;
    return true;
}

std::optional<std::size_t> RecordTable::find(std::span<const std::uint32_t> rec) const {
    if (slots_.empty()) return std::nullopt;
    std::uint32_t r = slots_[find_slot(rec, hash(rec))];
    if (r == kEmptySlot) return std::nullopt;
    return r;
}

std::vector<std::vector<std::uint32_t>> RecordTable::sorted_records() const {
    std::vector<std::vector<std::uint32_t>> out;
    for (std::size_t r = 0; r < count_; ++r) {
        auto rec = record(r);
        out.emplace_back(rec.begin(), rec.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// the four node cases

RecordTable dp_intro(int label, const SignatureFamily& family, std::optional<int> prescribed, bool live) {
    if (prescribed && (*prescribed < 0 || *prescribed >= family.target().order()))
        throw PreconditionError("prescribed image is not a target vertex");
    if (!live) {
        RecordTable t(std::vector<int>{});
        t.insert({});
        return t;
    }
    RecordTable t(std::vector<int>{label});
    if (prescribed) {
        for (std::uint32_t s : family.contained_in_neighborhood(*prescribed)) t.insert({&s, 1});
    } else {
        // every signature set lies inside some neighborhood
        for (std::uint32_t s = 0; s < family.size(); ++s) t.insert({&s, 1});
    }
    return t;
}

RecordTable dp_relabel(int i, int j, const RecordTable& child) {
    const int pi = child.position(i);
    if (pi < 0) return child;
    const int pj = child.position(j);
    std::vector<int> labels;
    for (int l : child.labels())
        if (l != i) labels.push_back(l);
    if (pj < 0) labels.push_back(j);
    RecordTable out(labels);
    const int pos_j = out.position(j);
    std::vector<std::uint32_t> rec(out.stride());
    for (std::size_t r = 0; r < child.size(); ++r) {
        auto src = child.record(r);
        if (pj >= 0 && src[static_cast<std::size_t>(pi)] != src[static_cast<std::size_t>(pj)]) continue;
        std::size_t k = 0;
        for (std::size_t c = 0; c < child.stride(); ++c) {
            int l = child.labels()[c];
            if (l == i) continue;
            if (pj < 0 && static_cast<int>(k) == pos_j) rec[k++] = src[static_cast<std::size_t>(pi)];
            rec[k++] = src[c];
        }
        if (pj < 0 && static_cast<int>(k) == pos_j) rec[k++] = src[static_cast<std::size_t>(pi)];
        out.insert(rec);
    }
    return out;
}

RecordTable dp_union(const RecordTable& left, const RecordTable& right) {
    std::vector<int> labels = left.labels();
    std::vector<int> shared;
    for (int l : right.labels()) {
        if (left.position(l) >= 0) shared.push_back(l);
        else labels.push_back(l);
    }
    RecordTable out(labels);
    std::vector<int> from_left(out.stride(), -1), from_right(out.stride(), -1);
    for (std::size_t c = 0; c < out.stride(); ++c) {
        int l = out.labels()[c];
        from_left[c] = left.position(l);
        from_right[c] = right.position(l);
    }
    std::vector<int> key_left, key_right;
    for (int l : shared) {
        key_left.push_back(left.position(l));
        key_right.push_back(right.position(l));
    }

    // hash-join keyed by the values on the shared labels
    RecordTable keys(shared);
    std::vector<std::vector<std::uint32_t>> buckets;
    std::vector<std::uint32_t> key(shared.size());
    for (std::size_t r = 0; r < right.size(); ++r) {
        auto rec = right.record(r);
        for (std::size_t k = 0; k < shared.size(); ++k) key[k] = rec[static_cast<std::size_t>(key_right[k])];
        if (keys.insert(key)) buckets.emplace_back();
        buckets[*keys.find(key)].push_back(static_cast<std::uint32_t>(r));
    }
    std::vector<std::uint32_t> rec(out.stride());
    for (std::size_t r = 0; r < left.size(); ++r) {
        auto lrec = left.record(r);
        for (std::size_t k = 0; k < shared.size(); ++k) key[k] = lrec[static_cast<std::size_t>(key_left[k])];
        auto b = keys.find(key);
        if (!b) continue;
        for (std::uint32_t rr : buckets[*b]) {
            auto rrec = right.record(rr);
            for (std::size_t c = 0; c < out.stride(); ++c)
                rec[c] = from_left[c] >= 0 ? lrec[static_cast<std::size_t>(from_left[c])]
                                           : rrec[static_cast<std::size_t>(from_right[c])];
            out.insert(rec);
        }
    }
    return out;
}

RecordTable dp_join(int i, int j, const RecordTable& child, const SignatureFamily& family,
                    std::span<const int> live_after) {
    const int pi = child.position(i);
    const int pj = child.position(j);
    if (pi < 0 || pj < 0) return child; // no edges can be missing there
    std::vector<int> labels(live_after.begin(), live_after.end());
    RecordTable out(labels);
    const int qi = out.position(i), qj = out.position(j);
    std::vector<int> from(out.stride());
    for (std::size_t c = 0; c < out.stride(); ++c) from[c] = child.position(out.labels()[c]);

    const Graph& h = family.target();
    std::vector<std::uint32_t> rec(out.stride());
    const std::uint32_t none = 0;
    const std::vector<std::uint32_t> single{none};
    for (std::size_t r = 0; r < child.size(); ++r) {
        auto src = child.record(r);
        std::uint32_t si = src[static_cast<std::size_t>(pi)], sj = src[static_cast<std::size_t>(pj)];
        if (!is_subset(signature_of(h, family.set(sj)), family.set(si))) continue;
        for (std::size_t c = 0; c < out.stride(); ++c) rec[c] = src[static_cast<std::size_t>(from[c])];
        const auto& opts_i = qi >= 0 ? family.subsets_of(si) : single;
        const auto& opts_j = qj >= 0 ? family.subsets_of(sj) : single;
        for (std::uint32_t a : opts_i) {
            if (qi >= 0) rec[static_cast<std::size_t>(qi)] = a;
            for (std::uint32_t b : opts_j) {
                if (qj >= 0) rec[static_cast<std::size_t>(qj)] = b;
                out.insert(rec);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// driver

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

bool within_bound(std::size_t records, std::size_t s, std::size_t live) {
    long double bound = std::pow(static_cast<long double>(s), static_cast<long double>(live));
    return static_cast<long double>(records) <= bound;
}

// Evaluates one expression (any shape) bottom-up and folds the result into
// `report`. Returns the acceptance.
bool run_dp(const KExpression& expr, const SignatureFamily& family, std::span<const int> prescribed,
            SolveReport& report) {
    LivenessAnnotation ann = annotate_liveness(expr);
    const Graph& g = ann.final_graph.graph;

    std::vector<int> order;
    order.reserve(expr.size());
    {
        std::vector<std::pair<int, bool>> stack{{expr.root(), false}};
        while (!stack.empty()) {
            auto [idx, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                order.push_back(idx);
                continue;
            }
            const auto& n = expr.node(idx);
            stack.push_back({idx, true});
            if (n.kind == NodeKind::unite) stack.push_back({n.right, false});
            if (n.kind != NodeKind::intro) stack.push_back({n.left, false});
        }
    }

    std::vector<RecordTable> stack;
    for (int idx : order) {
        const auto& n = expr.node(idx);
        const auto& live = ann.live[static_cast<std::size_t>(idx)];
        switch (n.kind) {
        case NodeKind::intro: {
            std::optional<int> pre;
            if (!prescribed.empty() && prescribed[static_cast<std::size_t>(n.left)] >= 0)
                pre = prescribed[static_cast<std::size_t>(n.left)];
            stack.push_back(dp_intro(n.a, family, pre, g.degree(n.left) > 0));
            break;
        }
        case NodeKind::unite: {
            RecordTable right = std::move(stack.back());
            stack.pop_back();
            stack.back() = dp_union(stack.back(), right);
            break;
        }
        case NodeKind::relabel:
            stack.back() = dp_relabel(n.a, n.b, stack.back());
            break;
        case NodeKind::join:
            stack.back() = dp_join(n.a, n.b, stack.back(), family, live);
            break;
        }
        const RecordTable& t = stack.back();
        if (t.labels() != live) throw Error("internal: record keys disagree with the live labels");
        report.node_stats.push_back({static_cast<std::uint32_t>(t.size()), static_cast<std::uint32_t>(live.size())});
        report.peak_records = std::max(report.peak_records, t.size());
        if (!within_bound(t.size(), family.size(), live.size())) report.bound_ok = false;
        if (t.empty()) return false;
    }
    const RecordTable& root = stack.back();
    return root.stride() == 0 && root.size() == 1;
}

} // namespace

SolveReport solve(const KExpression& expr, const Graph& h, std::span<const int> prescribed, const SolveOptions& options) {
    auto start = std::chrono::steady_clock::now();
    expr.validate();
    if (!prescribed.empty() && prescribed.size() != static_cast<std::size_t>(expr.vertex_count()))
        throw PreconditionError("prescribed mapping has the wrong size");
    for (int x : prescribed)
        if (x >= h.order()) throw PreconditionError("prescribed image is not a target vertex");

    SolveReport report;
    report.method = "dp";
    report.width = expr.width();
    if (h.order() == 0) {
        report.answer = expr.vertex_count() == 0;
        report.wall_time_ms = elapsed_ms(start);
        return report;
    }
    SignatureFamily family = SignatureFamily::build(h);
    report.signature_number = family.size();

    LabeledGraph lg = evaluate(expr);
    const Graph& g = lg.graph;
    std::vector<std::vector<int>> comps;
    if (options.split_components) comps = component_vertex_sets(g);
    report.components = options.split_components ? static_cast<int>(comps.size()) : 1;

    bool accept = true;
    if (!options.split_components || comps.size() == 1) {
        accept = run_dp(expr, family, prescribed, report);
    } else {
        for (const auto& comp : comps) {
            if (comp.size() == 1) continue; // any image works, prescribed or not
            std::vector<char> keep(static_cast<std::size_t>(g.order()), 0);
            for (int v : comp) keep[static_cast<std::size_t>(v)] = 1;
            KExpression sub = restrict_expression(expr, keep);
            Mapping sub_pre;
            if (!prescribed.empty()) {
                sub_pre.assign(static_cast<std::size_t>(sub.vertex_count()), -1);
                for (int v = 0; v < sub.vertex_count(); ++v)
                    sub_pre[static_cast<std::size_t>(v)] = prescribed[static_cast<std::size_t>(g.vertex(sub.vertex_id(v)))];
            }
            if (!run_dp(sub, family, sub_pre, report)) {
                accept = false;
                break;
            }
        }
    }
    report.answer = accept;
    if (accept && options.witness_limit > 0 && g.order() <= options.witness_limit && h.order() <= kMaxOracleTarget)
        report.witness = find_homomorphism(g, h, prescribed);
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

SolveReport solve(const KExpression& expr, const Graph& h, const PartialMapping& partial, const SolveOptions& options) {
    LabeledGraph lg = evaluate(expr);
    Mapping pre = resolve_partial(lg.graph, h, partial);
    return solve(expr, h, pre, options);
}

SolveReport solve(const KExpression& expr, const Graph& h, const SolveOptions& options) {
    return solve(expr, h, std::span<const int>{}, options);
}

namespace {

// Hom(G, t) for the polynomial targets; nullopt when t is not trivial.
std::optional<bool> polynomial_answer(const Graph& g, const Graph& t) {
    if (t.order() == 0) return g.order() == 0;
    if (has_loop(t)) return true;
    if (g.edge_count() == 0) return true;
    if (t.edge_count() == 0) return false;
    if (is_bipartite(t)) return is_bipartite(g);
    return std::nullopt;
}

void merge_stats(SolveReport& into, SolveReport&& part) {
    into.peak_records = std::max(into.peak_records, part.peak_records);
    into.bound_ok = into.bound_ok && part.bound_ok;
    into.signature_number = std::max(into.signature_number, part.signature_number);
    into.node_stats.insert(into.node_stats.end(), part.node_stats.begin(), part.node_stats.end());
    into.components = std::max(into.components, part.components);
}

// Target is a connected core.
bool solve_connected_core(const KExpression& expr, const Graph& g, const Graph& core, const SolveOptions& options,
                          SolveReport& report) {
    if (auto p = polynomial_answer(g, core)) {
        report.notes.push_back("core component " + core.name() + " is trivial");
        return *p;
    }
    if (core.order() > kMaxFactorInput) {
        report.notes.push_back("core too large to factorize; solving it directly");
        SolveReport part = solve(expr, core, std::span<const int>{}, options);
        bool ans = part.answer;
        merge_stats(report, std::move(part));
        return ans;
    }
    Factorization f = factorize_prime(core);
    for (const auto& factor : f.factors) {
        if (factor.order() == 1 && has_loop(factor)) continue;
        if (auto p = polynomial_answer(g, factor)) {
            report.notes.push_back("factor " + factor.name() + " is trivial");
            if (!*p) return false;
            continue;
        }
        report.notes.push_back("factor " + factor.name() + " with " + std::to_string(factor.order()) + " vertices");
        SolveReport part = solve(expr, factor, std::span<const int>{}, options);
        bool ans = part.answer;
        merge_stats(report, std::move(part));
        if (!ans) return false;
    }
    return true;
}

} // namespace

SolveReport solve_via_factors(const KExpression& expr, const Graph& target, const SolveOptions& options) {
    auto start = std::chrono::steady_clock::now();
    expr.validate();
    SolveReport report;
    report.width = expr.width();
    LabeledGraph lg = evaluate(expr);
    const Graph& g = lg.graph;

    if (auto p = polynomial_answer(g, target)) {
        report.method = "polynomial";
        report.answer = *p;
        report.wall_time_ms = elapsed_ms(start);
        return report;
    }
    report.method = "factors";
    CoreResult core = compute_core(target);
    report.notes.push_back("core has " + std::to_string(core.core.order()) + " vertices");
    if (auto p = polynomial_answer(g, core.core)) {
        report.method = "polynomial";
        report.answer = *p;
        report.wall_time_ms = elapsed_ms(start);
        return report;
    }

    auto core_parts = connected_components(core.core);
    if (core_parts.size() == 1) {
        report.answer = solve_connected_core(expr, g, core.core, options, report);
    } else {
        // every component of G has to land inside a single component of the core
        report.answer = true;
        for (const auto& comp : component_vertex_sets(g)) {
            std::vector<char> keep(static_cast<std::size_t>(g.order()), 0);
            for (int v : comp) keep[static_cast<std::size_t>(v)] = 1;
            KExpression sub = restrict_expression(expr, keep);
            Graph gc = evaluate(sub).graph;
            bool some = false;
            for (const auto& part : core_parts) {
                if (solve_connected_core(sub, gc, part, options, report)) {
                    some = true;
                    break;
                }
            }
            if (!some) {
                report.answer = false;
                break;
            }
        }
    }
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

} // namespace homcw
