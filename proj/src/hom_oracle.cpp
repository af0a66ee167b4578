#include "homcw/hom_oracle.hpp"

#include "homcw/error.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace homcw {

// ---------------------------------------------------------------------------
// partial mappings

PartialMapping parse_partial_mapping(std::string_view text) {
    PartialMapping out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string kw, g, h, extra;
        if (!(fields >> kw)) continue;
        if (kw != "map") throw ParseError("expected 'map', got '" + kw + "'", lineno);
        if (!(fields >> g >> h)) throw ParseError("map needs a G-vertex and an H-vertex", lineno);
        if (fields >> extra) throw ParseError("trailing token '" + extra + "'", lineno);
        if (!is_valid_vertex_id(g) || !is_valid_vertex_id(h)) throw ParseError("invalid vertex id", lineno);
        if (!out.emplace(g, h).second) throw ParseError("vertex '" + g + "' mapped twice", lineno);
    }
    return out;
}

std::string serialize_partial_mapping(const PartialMapping& m) {
    std::string out;
    for (const auto& [g, h] : m) out += "map " + g + " " + h + "\n";
    return out;
}

PartialMapping read_partial_mapping_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mapping file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_partial_mapping(buf.str());
}

void write_partial_mapping_file(const PartialMapping& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << serialize_partial_mapping(m);
}

Mapping resolve_partial(const Graph& g, const Graph& h, const PartialMapping& m) {
    Mapping out(static_cast<std::size_t>(g.order()), -1);
    for (const auto& [gv, hv] : m) {
        auto u = g.find_vertex(gv);
        if (!u) throw Error("mapping names unknown vertex '" + gv + "' of " + g.name());
        auto x = h.find_vertex(hv);
        if (!x) throw Error("mapping names unknown vertex '" + hv + "' of " + h.name());
        out[static_cast<std::size_t>(*u)] = *x;
    }
    return out;
}

PartialMapping to_partial_mapping(const Graph& g, const Graph& h, const Mapping& m) {
    PartialMapping out;
    for (std::size_t v = 0; v < m.size(); ++v)
        if (m[v] >= 0) out[g.vertex_id(static_cast<int>(v))] = h.vertex_id(m[v]);
    return out;
}

bool is_homomorphism(const Graph& g, const Graph& h, const Mapping& m) {
    if (m.size() != static_cast<std::size_t>(g.order())) return false;
    for (int x : m)
        if (x < 0 || x >= h.order()) return false;
    for (auto [u, v] : g.edges())
        if (!h.has_edge(m[static_cast<std::size_t>(u)], m[static_cast<std::size_t>(v)])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// search

namespace {

using Domain = std::uint64_t;

class Search {
public:
    Search(const Graph& g, const Graph& h, std::span<const int> prescribed) : g_(g), h_(h) {
        if (h.order() > kMaxOracleTarget)
            throw CapExceeded("homomorphism search: target has " + std::to_string(h.order()) + " vertices, cap is " +
                              std::to_string(kMaxOracleTarget));
        if (!prescribed.empty() && prescribed.size() != static_cast<std::size_t>(g.order()))
            throw PreconditionError("prescribed mapping has the wrong size");
        const int n = g.order();
        nbr_.resize(static_cast<std::size_t>(h.order()));
        Domain all = 0, looped = 0;
        for (int x = 0; x < h.order(); ++x) {
            nbr_[static_cast<std::size_t>(x)] = h.neighbor_mask(x);
            all |= Domain{1} << x;
            if (h.has_loop(x)) looped |= Domain{1} << x;
        }
        dom_.assign(static_cast<std::size_t>(n), all);
        queued_.assign(static_cast<std::size_t>(n), 0);
        for (int v = 0; v < n; ++v) {
            auto& d = dom_[static_cast<std::size_t>(v)];
            if (g.has_loop(v)) d &= looped;
            if (!prescribed.empty() && prescribed[static_cast<std::size_t>(v)] >= 0) {
                int x = prescribed[static_cast<std::size_t>(v)];
                if (x >= h.order()) throw PreconditionError("prescribed image out of range");
                d &= Domain{1} << x;
            }
        }
        ok_ = true;
        for (int v = 0; v < n && ok_; ++v) {
            if (dom_[static_cast<std::size_t>(v)] == 0) ok_ = false;
            enqueue(v);
        }
        if (ok_) ok_ = propagate();
    }

    /// Calls `on_solution(mapping)` for every solution until it returns false.
    template <class F>
    void run(F&& on_solution) {
        if (!ok_) return;
        stop_ = false;
        descend(on_solution);
    }

private:
    void enqueue(int v) {
        if (!queued_[static_cast<std::size_t>(v)]) {
            queued_[static_cast<std::size_t>(v)] = 1;
            queue_.push_back(v);
        }
    }

    Domain support(Domain d) const {
        Domain s = 0;
        while (d) {
            s |= nbr_[static_cast<std::size_t>(std::countr_zero(d))];
            d &= d - 1;
        }
        return s;
    }

    void narrow(int v, Domain d) {
        trail_.emplace_back(v, dom_[static_cast<std::size_t>(v)]);
        dom_[static_cast<std::size_t>(v)] = d;
    }

    bool propagate() {
        std::size_t head = 0;
        bool ok = true;
        while (head < queue_.size()) {
            int v = queue_[head++];
            queued_[static_cast<std::size_t>(v)] = 0;
            if (!ok) continue;
            Domain sup = support(dom_[static_cast<std::size_t>(v)]);
            for (int u : g_.neighbors(v)) {
                Domain cur = dom_[static_cast<std::size_t>(u)];
                Domain next = cur & sup;
                if (next == cur) continue;
                if (next == 0) {
                    ok = false;
                    break;
                }
                narrow(u, next);
                enqueue(u);
            }
        }
        queue_.clear();
        return ok;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [v, d] = trail_.back();
            trail_.pop_back();
            dom_[static_cast<std::size_t>(v)] = d;
        }
    }

    template <class F>
    void descend(F& on_solution) {
        int best = -1, best_size = 65;
        for (int v = 0; v < g_.order(); ++v) {
            int s = std::popcount(dom_[static_cast<std::size_t>(v)]);
            if (s > 1 && s < best_size) {
                best = v;
                best_size = s;
                if (s == 2) break;
            }
        }
        if (best < 0) {
            Mapping m(static_cast<std::size_t>(g_.order()));
            for (int v = 0; v < g_.order(); ++v) m[static_cast<std::size_t>(v)] = std::countr_zero(dom_[static_cast<std::size_t>(v)]);
            if (!on_solution(std::move(m))) stop_ = true;
            return;
        }
        Domain d = dom_[static_cast<std::size_t>(best)];
        while (d && !stop_) {
            int x = std::countr_zero(d);
            d &= d - 1;
            std::size_t mark = trail_.size();
            narrow(best, Domain{1} << x);
            enqueue(best);
            if (propagate()) descend(on_solution);
            undo(mark);
        }
    }

    const Graph& g_;
    const Graph& h_;
    std::vector<Domain> nbr_;
    std::vector<Domain> dom_;
    std::vector<std::pair<int, Domain>> trail_;
    std::vector<int> queue_;
    std::vector<char> queued_;
    bool ok_ = false;
    bool stop_ = false;
};

} // namespace

std::optional<Mapping> find_homomorphism(const Graph& g, const Graph& h, std::span<const int> prescribed) {
    std::optional<Mapping> found;
    if (h.order() == 0) {
        if (g.order() == 0) return Mapping{};
        return std::nullopt;
    }
    Search search(g, h, prescribed);
    search.run([&](Mapping m) {
        found = std::move(m);
        return false;
    });
    return found;
}

std::optional<Mapping> find_homomorphism(const Graph& g, const Graph& h, const PartialMapping& partial) {
    Mapping pre = resolve_partial(g, h, partial);
    return find_homomorphism(g, h, pre);
}

bool homomorphic(const Graph& g, const Graph& h) { return find_homomorphism(g, h).has_value(); }

Extensions enumerate_extensions(const Graph& g, const Graph& h, std::span<const int> prescribed, std::size_t cap) {
    Extensions out;
    if (h.order() == 0) {
        if (g.order() == 0 && cap > 0) out.mappings.emplace_back();
        return out;
    }
    Search search(g, h, prescribed);
    search.run([&](Mapping m) {
        if (out.mappings.size() == cap) {
            out.truncated = true;
            return false;
        }
        out.mappings.push_back(std::move(m));
        return true;
    });
    std::sort(out.mappings.begin(), out.mappings.end());
    return out;
}

// ---------------------------------------------------------------------------
// cores

CoreResult compute_core(const Graph& h) {
    if (h.order() > kMaxCoreInput)
        throw CapExceeded("core computation: " + std::to_string(h.order()) + " vertices, cap is " +
                          std::to_string(kMaxCoreInput));
    std::vector<int> current(static_cast<std::size_t>(h.order()));
    std::iota(current.begin(), current.end(), 0);
    Mapping to_current(current); // input vertex -> position in `current`

    bool shrunk = true;
    while (shrunk && current.size() > 1) {
        shrunk = false;
        Graph cur = induced_subgraph(h, current);
        for (std::size_t drop = 0; drop < current.size() && !shrunk; ++drop) {
            std::vector<int> rest;
            for (std::size_t i = 0; i < current.size(); ++i)
                if (i != drop) rest.push_back(static_cast<int>(i));
            Graph smaller = induced_subgraph(cur, rest);
            auto f = find_homomorphism(cur, smaller);
            if (!f) continue;
            // keep only the image; positions are re-indexed ascending
            std::set<int> image;
            for (int x : *f) image.insert(rest[static_cast<std::size_t>(x)]);
            std::vector<int> next;
            std::vector<int> position(current.size(), -1);
            for (int p : image) {
                position[static_cast<std::size_t>(p)] = static_cast<int>(next.size());
                next.push_back(current[static_cast<std::size_t>(p)]);
            }
            for (auto& c : to_current) c = position[static_cast<std::size_t>(rest[static_cast<std::size_t>((*f)[static_cast<std::size_t>(c)])])];
            current = std::move(next);
            shrunk = true;
        }
    }

    CoreResult out{induced_subgraph(h, current), current, to_current};
    out.core.set_name("core(" + h.name() + ")");
    // The restriction to the core is an automorphism; undo it so the map
    // fixes every core vertex.
    Mapping inverse(current.size());
    for (std::size_t i = 0; i < current.size(); ++i)
        inverse[static_cast<std::size_t>(to_current[static_cast<std::size_t>(current[i])])] = static_cast<int>(i);
    for (auto& c : out.retraction) c = inverse[static_cast<std::size_t>(c)];
    return out;
}

bool is_core(const Graph& h) { return compute_core(h).core.order() == h.order(); }

bool is_trivial(const Graph& h) { return has_loop(h) || is_bipartite(h); }

bool incomparable(const Graph& g, const Graph& h) { return !homomorphic(g, h) && !homomorphic(h, g); }

std::vector<VertexSet> brute_force_family(const Graph& h) {
    if (h.order() > 20) throw CapExceeded("subset enumeration needs at most 20 vertices");
    std::set<VertexSet> found;
    const VertexSet limit = VertexSet{1} << h.order();
    for (VertexSet t = 1; t < limit; ++t) {
        VertexSet s = signature_of(h, t);
        if (s) found.insert(s);
    }
    return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// factorization

bool Factorization::is_prime() const {
    int nontrivial = 0;
    for (const auto& f : factors)
        if (!(f.order() == 1 && has_loop(f))) ++nontrivial;
    return nontrivial <= 1;
}

namespace {

enum : std::uint8_t { unknown = 0, yes = 1, no = 2 };

// Searches for a bijection V(h) -> [a] x [b] that turns the edge relation
// into a product of two relations.
class GridSearch {
public:
    GridSearch(const Graph& h, int a, int b) : h_(h), a_(a), b_(b) {
        const int n = h.order();
        // BFS order so each new vertex already has placed neighbors
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        int start = 0;
        for (int v = 1; v < n; ++v)
            if (h.degree(v) > h.degree(start)) start = v;
        order_.push_back(start);
        seen[static_cast<std::size_t>(start)] = 1;
        for (std::size_t head = 0; head < order_.size(); ++head)
            for (int u : h.neighbors(order_[head]))
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = 1;
                    order_.push_back(u);
                }
        for (int v = 0; v < n; ++v)
            if (!seen[static_cast<std::size_t>(v)]) order_.push_back(v);
        row_.assign(static_cast<std::size_t>(n), -1);
        col_.assign(static_cast<std::size_t>(n), -1);
        used_.assign(static_cast<std::size_t>(a * b), 0);
    }

    bool run() {
        State s;
        s.e1.assign(static_cast<std::size_t>(a_ * a_), unknown);
        s.e2.assign(static_cast<std::size_t>(b_ * b_), unknown);
        return place(0, 0, 0, s);
    }

    int row(int v) const { return row_[static_cast<std::size_t>(v)]; }
    int col(int v) const { return col_[static_cast<std::size_t>(v)]; }
    bool rel1(int r, int s) const { return result_.e1[static_cast<std::size_t>(r * a_ + s)] == yes; }
    bool rel2(int c, int d) const { return result_.e2[static_cast<std::size_t>(c * b_ + d)] == yes; }

private:
    struct State {
        std::vector<std::uint8_t> e1, e2;
    };

    static bool set(std::vector<std::uint8_t>& rel, int stride, int x, int y, std::uint8_t value, bool& changed) {
        auto& p = rel[static_cast<std::size_t>(x * stride + y)];
        if (p == value) return true;
        if (p != unknown) return false;
        p = value;
        rel[static_cast<std::size_t>(y * stride + x)] = value;
        changed = true;
        return true;
    }

    bool propagate(std::size_t placed, State& s) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < placed; ++i) {
                int u = order_[i];
                int ru = row(u), cu = col(u);
                for (std::size_t j = i; j < placed; ++j) {
                    int w = order_[j];
                    int rw = row(w), cw = col(w);
                    auto& p1 = s.e1[static_cast<std::size_t>(ru * a_ + rw)];
                    auto& p2 = s.e2[static_cast<std::size_t>(cu * b_ + cw)];
                    if (h_.has_edge(u, w)) {
                        if (!set(s.e1, a_, ru, rw, yes, changed) || !set(s.e2, b_, cu, cw, yes, changed)) return false;
                    } else if (p1 == yes && p2 == yes) {
                        return false;
                    } else if (p1 == yes && p2 == unknown) {
                        set(s.e2, b_, cu, cw, no, changed);
                    } else if (p2 == yes && p1 == unknown) {
                        set(s.e1, a_, ru, rw, no, changed);
                    }
                }
            }
        }
        // |N(v)| = |N1(row)| * |N2(col)| must stay reachable
        for (std::size_t i = 0; i < placed; ++i) {
            int v = order_[i];
            int y1 = 0, n1 = 0, y2 = 0, n2 = 0;
            for (int r = 0; r < a_; ++r) {
                auto p = s.e1[static_cast<std::size_t>(row(v) * a_ + r)];
                y1 += p == yes;
                n1 += p == no;
            }
            for (int c = 0; c < b_; ++c) {
                auto p = s.e2[static_cast<std::size_t>(col(v) * b_ + c)];
                y2 += p == yes;
                n2 += p == no;
            }
            int d = h_.degree(v);
            if (d < y1 * y2 || d > (a_ - n1) * (b_ - n2)) return false;
        }
        return true;
    }

    bool place(std::size_t placed, int rows_used, int cols_used, const State& s) {
        if (placed == order_.size()) {
            result_ = s;
            return true;
        }
        int v = order_[placed];
        int max_row = std::min(rows_used, a_ - 1), max_col = std::min(cols_used, b_ - 1);
        for (int r = 0; r <= max_row; ++r)
            for (int c = 0; c <= max_col; ++c) {
                auto& cell = used_[static_cast<std::size_t>(r * b_ + c)];
                if (cell) continue;
                cell = 1;
                row_[static_cast<std::size_t>(v)] = r;
                col_[static_cast<std::size_t>(v)] = c;
                State next = s;
                if (propagate(placed + 1, next) &&
                    place(placed + 1, std::max(rows_used, r + 1), std::max(cols_used, c + 1), next))
                    return true;
                cell = 0;
            }
        row_[static_cast<std::size_t>(v)] = -1;
        col_[static_cast<std::size_t>(v)] = -1;
        return false;
    }

    const Graph& h_;
    int a_, b_;
    std::vector<int> order_;
    std::vector<int> row_, col_;
    std::vector<char> used_;
    State result_;
};

struct Split {
    Graph first, second;
    std::vector<int> row, col;
};

Graph relation_graph(int size, const std::function<bool(int, int)>& rel, const std::string& name) {
    std::vector<std::string> ids;
    for (int i = 0; i < size; ++i) ids.push_back(std::to_string(i));
    std::vector<std::pair<int, int>> edges;
    for (int x = 0; x < size; ++x)
        for (int y = x; y < size; ++y)
            if (rel(x, y)) edges.emplace_back(x, y);
    return Graph::from_edges(name, ids, edges, true);
}

std::optional<Split> find_split(const Graph& h) {
    const int n = h.order();
    for (int a = 2; a * a <= n; ++a) {
        if (n % a) continue;
        int b = n / a;
        GridSearch search(h, a, b);
        if (!search.run()) continue;
        Split out{relation_graph(a, [&](int x, int y) { return search.rel1(x, y); }, h.name() + "_a"),
                  relation_graph(b, [&](int x, int y) { return search.rel2(x, y); }, h.name() + "_b"),
                  {},
                  {}};
        for (int v = 0; v < n; ++v) {
            out.row.push_back(search.row(v));
            out.col.push_back(search.col(v));
        }
        return out;
    }
    return std::nullopt;
}

void factor_into(const Graph& h, std::vector<Graph>& factors, std::vector<std::vector<int>>& coords) {
    auto split = find_split(h);
    if (!split) {
        factors.push_back(h);
        coords.clear();
        for (int v = 0; v < h.order(); ++v) coords.push_back({v});
        return;
    }
    std::vector<Graph> fa, fb;
    std::vector<std::vector<int>> ca, cb;
    factor_into(split->first, fa, ca);
    factor_into(split->second, fb, cb);
    factors = std::move(fa);
    factors.insert(factors.end(), fb.begin(), fb.end());
    coords.assign(static_cast<std::size_t>(h.order()), {});
    for (int v = 0; v < h.order(); ++v) {
        auto& c = coords[static_cast<std::size_t>(v)];
        c = ca[static_cast<std::size_t>(split->row[static_cast<std::size_t>(v)])];
        const auto& tail = cb[static_cast<std::size_t>(split->col[static_cast<std::size_t>(v)])];
        c.insert(c.end(), tail.begin(), tail.end());
    }
}

} // namespace

Factorization factorize_prime(const Graph& h) {
    if (h.order() < 2) throw PreconditionError("factorization needs at least 2 vertices");
    if (h.order() > kMaxFactorInput)
        throw CapExceeded("factorization: " + std::to_string(h.order()) + " vertices, cap is " +
                          std::to_string(kMaxFactorInput));
    if (!is_connected(h) || is_bipartite(h)) throw PreconditionError("factorization needs a connected non-bipartite graph");
    Factorization out{h, {}, {}};
    factor_into(h, out.factors, out.coords);
    for (std::size_t i = 0; i < out.factors.size(); ++i) out.factors[i].set_name(h.name() + "_" + std::to_string(i + 1));
    if (out.factors.size() == 1) {
        out.factors.push_back(named::loop_vertex());
        for (auto& c : out.coords) c.push_back(0);
    }
    return out;
}

bool verify_factorization(const Factorization& f) {
    const Graph& h = f.target;
    if (f.coords.size() != static_cast<std::size_t>(h.order())) return false;
    std::set<std::vector<int>> seen;
    std::size_t total = 1;
    for (const auto& fac : f.factors) total *= static_cast<std::size_t>(fac.order());
    if (total != static_cast<std::size_t>(h.order())) return false;
    for (const auto& c : f.coords) {
        if (c.size() != f.factors.size()) return false;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] < 0 || c[i] >= f.factors[i].order()) return false;
        if (!seen.insert(c).second) return false;
    }
    for (int u = 0; u < h.order(); ++u)
        for (int v = u; v < h.order(); ++v) {
            bool product_edge = true;
            for (std::size_t i = 0; i < f.factors.size() && product_edge; ++i)
                product_edge = f.factors[i].has_edge(f.coords[static_cast<std::size_t>(u)][i], f.coords[static_cast<std::size_t>(v)][i]);
            if (product_edge != h.has_edge(u, v)) return false;
        }
    return true;
}

SplitTarget::SplitTarget(const Factorization& f) : target(f.target) {
    if (f.factors.empty()) throw PreconditionError("empty factorization");
    h1 = f.factors[0];
    std::vector<Graph> rest(f.factors.begin() + 1, f.factors.end());
    w = rest.empty() ? named::loop_vertex() : (rest.size() == 1 ? rest[0] : direct_product(rest));
    to_target.assign(static_cast<std::size_t>(h1.order() * w.order()), -1);
    from_target.assign(static_cast<std::size_t>(target.order()), -1);
    for (int v = 0; v < target.order(); ++v) {
        const auto& c = f.coords[static_cast<std::size_t>(v)];
        int y = 0;
        for (std::size_t i = 1; i < c.size(); ++i) y = y * f.factors[i].order() + c[i];
        int idx = c[0] * w.order() + y;
        to_target[static_cast<std::size_t>(idx)] = v;
        from_target[static_cast<std::size_t>(v)] = idx;
    }
}

// ---------------------------------------------------------------------------
// projectivity

ProjectivityResult check_projective(const Factorization& f, int i, int ell, std::size_t cap) {
    if (i < 0 || static_cast<std::size_t>(i) >= f.factors.size()) throw PreconditionError("factor index out of range");
    if (ell < 2) throw PreconditionError("projectivity check needs ell >= 2");
    const Graph& hi = f.factors[static_cast<std::size_t>(i)];
    if (is_trivial(hi)) throw PreconditionError("factor '" + hi.name() + "' is trivial");

    std::vector<Graph> parts;
    std::size_t total = 1;
    for (std::size_t k = 0; k < f.factors.size(); ++k) {
        int copies = static_cast<int>(k) == i ? ell : 1;
        for (int c = 0; c < copies; ++c) {
            parts.push_back(f.factors[k]);
            total *= static_cast<std::size_t>(f.factors[k].order());
            if (total > static_cast<std::size_t>(kMaxProjectiveProduct))
                throw CapExceeded("projectivity product exceeds " + std::to_string(kMaxProjectiveProduct) + " vertices");
        }
    }
    ProjectivityResult out;
    out.ell = ell;
    out.product = direct_product(parts);
    const Graph& a = out.product;

    // coordinates of every product vertex, first factor most significant
    const std::size_t m = parts.size();
    std::vector<std::vector<int>> coord(static_cast<std::size_t>(a.order()), std::vector<int>(m));
    for (int v = 0; v < a.order(); ++v) {
        int rem = v;
        for (std::size_t k = m; k-- > 0;) {
            coord[static_cast<std::size_t>(v)][k] = rem % parts[k].order();
            rem /= parts[k].order();
        }
    }
    const std::size_t first = static_cast<std::size_t>(i);
    Mapping prescribed(static_cast<std::size_t>(a.order()), -1);
    for (int v = 0; v < a.order(); ++v) {
        const auto& c = coord[static_cast<std::size_t>(v)];
        bool diagonal = true;
        for (std::size_t q = first + 1; q < first + static_cast<std::size_t>(ell); ++q) diagonal = diagonal && c[q] == c[first];
        if (diagonal) prescribed[static_cast<std::size_t>(v)] = c[first];
    }

    auto ext = enumerate_extensions(a, hi, prescribed, cap);
    out.truncated = ext.truncated;
    out.extension_count = ext.mappings.size();
    for (const auto& e : ext.mappings) {
        bool projection = false;
        for (std::size_t q = first; q < first + static_cast<std::size_t>(ell) && !projection; ++q) {
            projection = true;
            for (int v = 0; v < a.order() && projection; ++v)
                projection = e[static_cast<std::size_t>(v)] == coord[static_cast<std::size_t>(v)][q];
        }
        if (projection) {
            ++out.projection_count;
        } else if (!out.counterexample) {
            out.counterexample = e;
        }
    }
    out.projective = !out.counterexample && !out.truncated;
    return out;
}

} // namespace homcw
