#include "homcw/hardness_gen.hpp"

#include "homcw/error.hpp"
#include "homcw/signatures.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace homcw {

namespace {

std::string dots_to_underscores(std::string s) {
    std::replace(s.begin(), s.end(), '.', '_');
    return s;
}

void check_h1_vertex(const SplitTarget& st, int x, const char* what) {
    if (x < 0 || x >= st.h1.order())
        throw PreconditionError(std::string(what) + " " + std::to_string(x) + " is not a vertex of '" + st.h1.name() + "'");
}

void check_w_vertex(const SplitTarget& st, int y, const char* what) {
    if (y < 0 || y >= st.w.order())
        throw PreconditionError(std::string(what) + " " + std::to_string(y) + " is not a vertex of '" + st.w.name() + "'");
}

// Coordinates of every vertex of a direct product (first factor most significant).
std::vector<std::vector<int>> product_coordinates(const std::vector<int>& orders) {
    std::size_t total = 1;
    for (int o : orders) total *= static_cast<std::size_t>(o);
    std::vector<std::vector<int>> out(total, std::vector<int>(orders.size(), 0));
    std::vector<int> cur(orders.size(), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        out[idx] = cur;
        for (std::size_t i = orders.size(); i-- > 0;) {
            if (++cur[i] < orders[i]) break;
            cur[i] = 0;
        }
    }
    return out;
}

int product_index(const std::vector<int>& orders, const std::vector<int>& coord) {
    int idx = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) idx = idx * orders[i] + coord[i];
    return idx;
}

void check_distinct_abc(const SplitTarget& st, int a, int b, int c) {
    check_h1_vertex(st, a, "a");
    check_h1_vertex(st, b, "b");
    check_h1_vertex(st, c, "c");
    if (a == b || a == c || b == c) throw PreconditionError("or-gadget needs distinct a, b, c");
}

// Extends a placed S-gadget from the images of p and q by the coordinate
// projection that realizes their pair.
void fill_by_projection(const SplitTarget& st, const GadgetInstance& g, const std::vector<int>& global_of,
                        Mapping& h) {
    int pi = h[static_cast<std::size_t>(global_of[static_cast<std::size_t>(g.p)])];
    int qi = h[static_cast<std::size_t>(global_of[static_cast<std::size_t>(g.q)])];
    if (pi < 0 || qi < 0) throw Error("internal: gadget endpoints are unassigned");
    if (st.w_of(pi) != g.w || st.w_of(qi) != g.w_prime)
        throw Error("internal: gadget endpoints have the wrong W coordinate");
    VertexPair want{st.h1_of(pi), st.h1_of(qi)};
    auto it = std::find(g.pairs.begin(), g.pairs.end(), want);
    if (it == g.pairs.end()) throw Error("internal: endpoint images are not a pair of the gadget relation");
    const auto i = static_cast<std::size_t>(it - g.pairs.begin());
    for (int x = 0; x < g.graph.order(); ++x) {
        const auto& cx = g.coords[static_cast<std::size_t>(x)];
        int img = st.vertex(cx[i], cx.back());
        int& slot = h[static_cast<std::size_t>(global_of[static_cast<std::size_t>(x)])];
        if (slot >= 0 && slot != img) throw Error("internal: conflicting images while filling a gadget");
        slot = img;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// gadgets

GadgetInstance s_gadget(const SplitTarget& st, const std::vector<VertexPair>& pairs, int w, int w_prime) {
    if (pairs.empty()) throw PreconditionError("S-gadget needs a nonempty relation");
    for (const auto& [x, y] : pairs) {
        check_h1_vertex(st, x, "relation entry");
        check_h1_vertex(st, y, "relation entry");
    }
    check_w_vertex(st, w, "w");
    check_w_vertex(st, w_prime, "w'");

    const std::size_t ell = pairs.size();
    std::vector<Graph> parts(ell, st.h1);
    parts.push_back(st.w);
    std::vector<int> orders(ell, st.h1.order());
    orders.push_back(st.w.order());

    GadgetInstance g;
    g.kind = "s";
    g.graph = direct_product(parts);
    g.graph.set_name("F");
    g.pairs = pairs;
    g.w = w;
    g.w_prime = w_prime;
    g.coords = product_coordinates(orders);
    g.partial.assign(static_cast<std::size_t>(g.graph.order()), -1);
    for (int v = 0; v < g.graph.order(); ++v) {
        const auto& c = g.coords[static_cast<std::size_t>(v)];
        if (std::all_of(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(ell), [&](int x) { return x == c[0]; }))
            g.partial[static_cast<std::size_t>(v)] = st.vertex(c[0], c.back());
    }
    std::vector<int> pc, qc;
    for (const auto& [x, y] : pairs) {
        pc.push_back(x);
        qc.push_back(y);
    }
    pc.push_back(w);
    qc.push_back(w_prime);
    g.p = product_index(orders, pc);
    g.q = product_index(orders, qc);
    return g;
}

GadgetInstance s_gadget(const Factorization& f, const std::vector<VertexPair>& pairs, int w, int w_prime) {
    return s_gadget(SplitTarget(f), pairs, w, w_prime);
}

std::vector<VertexPair> implication_pairs(int h1_order, int a, int b) {
    if (a < 0 || a >= h1_order || b < 0 || b >= h1_order) throw PreconditionError("implication vertex out of range");
    std::vector<VertexPair> out;
    for (int x = 0; x < h1_order; ++x) {
        if (x == a) {
            out.emplace_back(a, b);
            continue;
        }
        for (int y = 0; y < h1_order; ++y) out.emplace_back(x, y);
    }
    return out;
}

GadgetInstance implication_gadget(const SplitTarget& st, int a, int b, int w, int w_prime) {
    check_h1_vertex(st, a, "a");
    check_h1_vertex(st, b, "b");
    auto g = s_gadget(st, implication_pairs(st.h1.order(), a, b), w, w_prime);
    g.kind = "implication";
    g.a = a;
    g.b = b;
    return g;
}

GadgetInstance implication_gadget(const Factorization& f, int a, int b, int w, int w_prime) {
    return implication_gadget(SplitTarget(f), a, b, w, w_prime);
}

std::vector<VertexPair> or_left_pairs(int a, int b, int c) {
    return {{a, a}, {a, b}, {a, c}, {c, a}, {c, c}};
}

std::vector<VertexPair> or_middle_pairs(int a, int b, int c) {
    std::vector<VertexPair> out;
    for (int x : {a, b, c})
        for (int y : {a, b, c})
            if (!((x == b && y == c) || (x == c && y == b))) out.emplace_back(x, y);
    return out;
}

std::vector<VertexPair> or_right_pairs(int a, int b, int c) {
    return {{a, a}, {a, b}, {b, a}, {b, b}, {c, a}};
}

GadgetInstance or_gadget(const SplitTarget& st, int a, int b, int c, int w, int t) {
    if (t < 1) throw PreconditionError("or-gadget needs t >= 1, got " + std::to_string(t));
    check_distinct_abc(st, a, b, c);
    check_w_vertex(st, w, "w");

    GadgetInstance g;
    g.kind = "or";
    g.a = a;
    g.b = b;
    g.c = c;
    g.w = w;
    g.w_prime = w;
    g.t = t;

    std::vector<std::string> ids;
    for (int k = 1; k <= t; ++k) ids.push_back("r" + std::to_string(k));
    g.partial.assign(static_cast<std::size_t>(t), -1);
    for (int k = 0; k < t; ++k) g.roots.push_back(k);
    std::vector<std::pair<int, int>> edges;

    if (t == 1) {
        g.partial[0] = st.vertex(a, w);
    } else {
        if (t == 2) {
            g.links.push_back(s_gadget(st, {{a, b}, {b, a}, {a, a}}, w, w));
        } else {
            g.links.push_back(s_gadget(st, or_left_pairs(a, b, c), w, w));
            for (int k = 0; k < t - 3; ++k) g.links.push_back(s_gadget(st, or_middle_pairs(a, b, c), w, w));
            g.links.push_back(s_gadget(st, or_right_pairs(a, b, c), w, w));
        }
        for (std::size_t l = 0; l < g.links.size(); ++l) {
            const auto& link = g.links[l];
            std::vector<int> at(static_cast<std::size_t>(link.graph.order()), -1);
            at[static_cast<std::size_t>(link.p)] = static_cast<int>(l);
            at[static_cast<std::size_t>(link.q)] = static_cast<int>(l + 1);
            for (int x = 0; x < link.graph.order(); ++x) {
                if (x == link.p || x == link.q) continue;
                at[static_cast<std::size_t>(x)] = static_cast<int>(ids.size());
                ids.push_back("g" + std::to_string(l + 1) + "_" + dots_to_underscores(link.graph.vertex_id(x)));
                g.partial.push_back(link.partial[static_cast<std::size_t>(x)]);
            }
            for (auto [u, v] : link.graph.edges()) edges.emplace_back(at[static_cast<std::size_t>(u)], at[static_cast<std::size_t>(v)]);
            g.link_vertex.push_back(std::move(at));
        }
    }
    g.graph = Graph::from_edges("or" + std::to_string(t), std::move(ids), edges);
    return g;
}

GadgetInstance or_gadget(const Factorization& f, int a, int b, int c, int w, int t) {
    return or_gadget(SplitTarget(f), a, b, c, w, t);
}

// ---------------------------------------------------------------------------
// gadget checks

SGadgetCheck verify_s_gadget(const SplitTarget& st, const GadgetInstance& gadget, std::size_t cap) {
    SGadgetCheck out;
    auto ext = enumerate_extensions(gadget.graph, st.target, gadget.partial, cap);
    out.extensions = ext.mappings.size();
    out.truncated = ext.truncated;
    std::set<VertexPair> seen;
    for (const auto& m : ext.mappings)
        seen.emplace(st.h1_of(m[static_cast<std::size_t>(gadget.p)]), st.h1_of(m[static_cast<std::size_t>(gadget.q)]));
    out.observed.assign(seen.begin(), seen.end());
    out.s1 = !ext.truncated && std::all_of(seen.begin(), seen.end(), [&](const VertexPair& pr) {
        return std::find(gadget.pairs.begin(), gadget.pairs.end(), pr) != gadget.pairs.end();
    });

    out.s2 = true;
    for (const auto& [x, y] : gadget.pairs) {
        Mapping pre = gadget.partial;
        auto& ps = pre[static_cast<std::size_t>(gadget.p)];
        auto& qs = pre[static_cast<std::size_t>(gadget.q)];
        int want_p = st.vertex(x, gadget.w), want_q = st.vertex(y, gadget.w_prime);
        if ((ps >= 0 && ps != want_p) || (qs >= 0 && qs != want_q)) {
            out.s2 = false;
            break;
        }
        ps = want_p;
        qs = want_q;
        if (!find_homomorphism(gadget.graph, st.target, pre)) {
            out.s2 = false;
            break;
        }
    }
    return out;
}

OrGadgetCheck verify_or_gadget(const SplitTarget& st, const GadgetInstance& gadget, std::size_t cap) {
    OrGadgetCheck out;
    auto ext = enumerate_extensions(gadget.graph, st.target, gadget.partial, cap);
    out.extensions = ext.mappings.size();
    out.truncated = ext.truncated;

    out.o1 = !ext.truncated;
    for (const auto& m : ext.mappings) {
        bool some_a = false;
        for (int r : gadget.roots) {
            int x = st.h1_of(m[static_cast<std::size_t>(r)]);
            if (x != gadget.a && x != gadget.b && x != gadget.c) out.o1 = false;
            some_a = some_a || x == gadget.a;
        }
        if (!some_a) out.o1 = false;
    }

    out.o2 = true;
    const int aw = st.vertex(gadget.a, gadget.w), bw = st.vertex(gadget.b, gadget.w), cw = st.vertex(gadget.c, gadget.w);
    for (int v : gadget.roots) {
        bool found = std::any_of(ext.mappings.begin(), ext.mappings.end(), [&](const Mapping& m) {
            for (int u : gadget.roots) {
                int img = m[static_cast<std::size_t>(u)];
                if (u == v ? img != aw : (img != bw && img != cw)) return false;
            }
            return true;
        });
        if (!found) {
            out.o2 = false;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSP instances

int CSPInstance::arity() const {
    int q = 0;
    for (const auto& c : constraints) q = std::max(q, static_cast<int>(c.vars.size()));
    return q;
}

bool CSPInstance::satisfied_by(const std::vector<int>& assignment) const {
    if (static_cast<int>(assignment.size()) != n) return false;
    for (const auto& c : constraints) {
        bool ok = std::any_of(c.allowed.begin(), c.allowed.end(), [&](const std::vector<int>& tuple) {
            for (std::size_t k = 0; k < c.vars.size(); ++k)
                if (assignment[static_cast<std::size_t>(c.vars[k])] != tuple[k]) return false;
            return true;
        });
        if (!ok) return false;
    }
    return true;
}

std::optional<std::vector<int>> CSPInstance::brute_force_solution() const {
    double space = 1;
    for (int i = 0; i < n; ++i) space *= domain;
    if (space > 5e7) throw CapExceeded("CSP search space too large for exhaustive search");
    if (domain < 1) return std::nullopt;
    std::vector<int> cur(static_cast<std::size_t>(n), 1);
    while (true) {
        if (satisfied_by(cur)) return cur;
        int i = n - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == domain) cur[static_cast<std::size_t>(i--)] = 1;
        if (i < 0) return std::nullopt;
        ++cur[static_cast<std::size_t>(i)];
    }
}

namespace {

int parse_int(const std::string& word, int line, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(word, &used);
    } catch (const std::exception&) {
        throw ParseError("expected " + what + ", got '" + word + "'", line);
    }
    if (used != word.size()) throw ParseError("expected " + what + ", got '" + word + "'", line);
    return v;
}

} // namespace

CSPInstance parse_csp(std::string_view text) {
    CSPInstance csp;
    bool have_header = false;
    std::set<std::vector<int>> seen_tuples;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ws(line);
        std::vector<std::string> words;
        for (std::string w; ws >> w;) words.push_back(w);
        if (words.empty()) continue;

        if (!have_header) {
            if (words[0] != "csp" || words.size() != 3) throw ParseError("expected header 'csp <n> <B>'", line_no);
            csp.n = parse_int(words[1], line_no, "variable count");
            csp.domain = parse_int(words[2], line_no, "domain size");
            if (csp.n < 1) throw ParseError("variable count must be positive", line_no);
            if (csp.domain < 1) throw ParseError("domain size must be positive", line_no);
            have_header = true;
        } else if (words[0] == "constraint") {
            if (words.size() < 2) throw ParseError("constraint without variables", line_no);
            CSPConstraint c;
            for (std::size_t k = 1; k < words.size(); ++k) {
                const auto& w = words[k];
                if (w.size() < 2 || w[0] != 'x') throw ParseError("expected variable 'x<i>', got '" + w + "'", line_no);
                int i = parse_int(w.substr(1), line_no, "variable index");
                if (i < 1 || i > csp.n) throw ParseError("variable " + w + " out of range 1.." + std::to_string(csp.n), line_no);
                c.vars.push_back(i - 1);
            }
            csp.constraints.push_back(std::move(c));
            seen_tuples.clear();
        } else if (words[0] == "allow") {
            if (csp.constraints.empty()) throw ParseError("'allow' before any constraint", line_no);
            auto& c = csp.constraints.back();
            if (words.size() - 1 != c.vars.size())
                throw ParseError("allow line has " + std::to_string(words.size() - 1) + " values, constraint has arity " +
                                     std::to_string(c.vars.size()),
                                 line_no);
            std::vector<int> tuple;
            for (std::size_t k = 1; k < words.size(); ++k) {
                int v = parse_int(words[k], line_no, "value");
                if (v < 1 || v > csp.domain)
                    throw ParseError("value " + words[k] + " out of range 1.." + std::to_string(csp.domain), line_no);
                tuple.push_back(v);
            }
            if (!seen_tuples.insert(tuple).second) throw ParseError("duplicate allowed tuple", line_no);
            c.allowed.push_back(std::move(tuple));
        } else {
            throw ParseError("unknown directive '" + words[0] + "'", line_no);
        }
    }
    if (!have_header) throw ParseError("missing header 'csp <n> <B>'", line_no + 1);
    return csp;
}

std::string serialize_csp(const CSPInstance& csp) {
    std::ostringstream out;
    out << "csp " << csp.n << ' ' << csp.domain << '\n';
    for (const auto& c : csp.constraints) {
        out << "constraint";
        for (int v : c.vars) out << " x" << v + 1;
        out << '\n';
        for (const auto& t : c.allowed) {
            out << "allow";
            for (int v : t) out << ' ' << v;
            out << '\n';
        }
    }
    return out.str();
}

CSPInstance read_csp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csp(buf.str());
}

// ---------------------------------------------------------------------------
// extension instances to plain Hom instances

namespace {

void require_nontrivial_core(const Graph& h) {
    if (is_trivial(h)) throw PreconditionError("target '" + h.name() + "' is trivial");
    if (!is_core(h)) throw PreconditionError("target '" + h.name() + "' is not a core");
}

std::vector<std::string> hat_ids(const Graph& g, const Graph& h) {
    std::vector<std::string> out;
    for (int u = 0; u < h.order(); ++u) {
        std::string id = "hat_" + h.vertex_id(u);
        while (g.find_vertex(id)) id += "_";
        out.push_back(std::move(id));
    }
    return out;
}


// Linear expressions: the copy of H goes first and each prescribed vertex is
// joined to its hat neighbours right after it is introduced. Works while the
// label class receiving the vertex carries a single prescription.
std::optional<KExpression> spine_wrap(const KExpression& expr, const std::vector<int>& tau, const Graph& h,
                                      const std::vector<std::string>& hats) {
    std::vector<int> spine; // top to bottom, unite nodes carry their leaf
    std::vector<int> leaf_of;
    int cur = expr.root();
    while (true) {
        const auto& nd = expr.node(cur);
        spine.push_back(cur);
        if (nd.kind == NodeKind::intro) break;
        if (nd.kind != NodeKind::unite) {
            cur = nd.left;
            continue;
        }
        if (expr.node(nd.right).kind == NodeKind::intro) {
            leaf_of.push_back(nd.right);
            cur = nd.left;
        } else if (expr.node(nd.left).kind == NodeKind::intro) {
            leaf_of.push_back(nd.left);
            cur = nd.right;
        } else {
            return std::nullopt;
        }
    }

    const int hat_base = expr.max_label();
    KExpression e;
    int acc = -1;
    for (int u = 0; u < h.order(); ++u) {
        int leaf = e.intro(hat_base + 1 + u, hats[static_cast<std::size_t>(u)]);
        acc = acc < 0 ? leaf : e.unite(acc, leaf);
    }
    for (auto [u, v] : h.edges()) acc = e.join(hat_base + 1 + u, hat_base + 1 + v, acc);

    std::map<int, std::map<int, int>> classes; // label -> prescription -> members
    auto add_vertex = [&](int intro_node) {
        const auto& nd = expr.node(intro_node);
        int x = tau[static_cast<std::size_t>(nd.left)];
        acc = e.unite(acc, e.intro(nd.a, expr.vertex_id(nd.left)));
        auto& cls = classes[nd.a];
        ++cls[x];
        if (x < 0) return true;
        if (cls.size() != 1) return false;
        for (int u : h.neighbors(x)) acc = e.join(nd.a, hat_base + 1 + u, acc);
        return true;
    };

    std::size_t next_leaf = leaf_of.size();
    for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
        const auto& nd = expr.node(*it);
        switch (nd.kind) {
        case NodeKind::intro:
            if (!add_vertex(*it)) return std::nullopt;
            break;
        case NodeKind::unite:
            if (!add_vertex(leaf_of[--next_leaf])) return std::nullopt;
            break;
        case NodeKind::relabel: {
            auto from = classes.find(nd.a);
            if (from != classes.end()) {
                auto& to = classes[nd.b];
                for (auto [x, count] : from->second) to[x] += count;
                classes.erase(nd.a);
            }
            acc = e.relabel(nd.a, nd.b, acc);
            break;
        }
        case NodeKind::join:
            acc = e.join(nd.a, nd.b, acc);
            break;
        }
    }
    e.set_root(acc);
    return e;
}
} // namespace

HomInstance homext_to_hom(const Graph& g, const Mapping& partial, const Graph& h, const KExpression* expr) {
    require_nontrivial_core(h);
    Mapping pre = partial.empty() ? Mapping(static_cast<std::size_t>(g.order()), -1) : partial;
    if (static_cast<int>(pre.size()) != g.order()) throw PreconditionError("partial mapping size does not match G");
    for (int x : pre)
        if (x < -1 || x >= h.order()) throw PreconditionError("prescribed image out of range");

    const int nu = h.order();
    const int base = g.order();
    auto hats = hat_ids(g, h);
    std::vector<std::string> ids = g.vertex_ids();
    ids.insert(ids.end(), hats.begin(), hats.end());
    auto edges = g.edges();
    for (auto [u, v] : h.edges()) edges.emplace_back(base + u, base + v);
    for (int v = 0; v < g.order(); ++v) {
        int x = pre[static_cast<std::size_t>(v)];
        if (x < 0) continue;
        for (int u : h.neighbors(x)) edges.emplace_back(v, base + u);
    }

    HomInstance out;
    out.graph = Graph::from_edges(g.name() + "_hom", ids, edges);
    for (int u = 0; u < nu; ++u) out.hat_vertex.push_back(base + u);
    if (!expr) return out;

    auto ev = evaluate(*expr, g.name());
    if (!same_vertices_and_edges(ev.graph, g)) throw PreconditionError("expression does not define G");
    // prescribed image per expression vertex
    std::vector<int> tau(static_cast<std::size_t>(expr->vertex_count()), -1);
    for (int v = 0; v < expr->vertex_count(); ++v) tau[static_cast<std::size_t>(v)] = pre[static_cast<std::size_t>(g.vertex(expr->vertex_id(v)))];

    std::map<int, std::set<int>> images_by_label;
    for (int v = 0; v < expr->vertex_count(); ++v)
        images_by_label[ev.label_of[static_cast<std::size_t>(v)]].insert(tau[static_cast<std::size_t>(v)]);
    const bool homogeneous = std::all_of(images_by_label.begin(), images_by_label.end(),
                                         [](const auto& kv) { return kv.second.size() == 1; });

    if (!homogeneous) {
        if (auto spined = spine_wrap(*expr, tau, h, hats)) {
            out.expr_strategy = "spine";
            out.expr = std::move(*spined);
            if (!same_vertices_and_edges(evaluate(*out.expr).graph, out.graph))
                throw Error("internal: wrapped expression does not define the wrapped graph");
            return out;
        }
    }

    LinearExpressionBuilder b;
    int hat_base = 0;
    std::vector<std::pair<int, int>> root_classes; // (label, prescribed image)
    if (homogeneous) {
        out.expr_strategy = "root-join";
        b.add_expression(*expr);
        hat_base = expr->max_label();
        for (const auto& [label, imgs] : images_by_label)
            if (*imgs.begin() >= 0) root_classes.emplace_back(label, *imgs.begin());
    } else {
        out.expr_strategy = "split-labels";
        std::set<int> used_tau{0};
        for (int x : tau) used_tau.insert(x + 1);
        const int span = nu + 1;
        auto split = [&](int label, int t) { return (label - 1) * span + t + 1; };
        KExpression e;
        std::vector<int> node_map(expr->size(), -1);
        for (int idx = 0; idx < static_cast<int>(expr->size()); ++idx) {
            const auto& nd = expr->node(idx);
            int made = -1;
            switch (nd.kind) {
            case NodeKind::intro:
                made = e.intro(split(nd.a, tau[static_cast<std::size_t>(nd.left)] + 1), expr->vertex_id(nd.left));
                break;
            case NodeKind::unite:
                made = e.unite(node_map[static_cast<std::size_t>(nd.left)], node_map[static_cast<std::size_t>(nd.right)]);
                break;
            case NodeKind::relabel:
                made = node_map[static_cast<std::size_t>(nd.left)];
                for (int t : used_tau) made = e.relabel(split(nd.a, t), split(nd.b, t), made);
                break;
            case NodeKind::join:
                made = node_map[static_cast<std::size_t>(nd.left)];
                for (int t1 : used_tau)
                    for (int t2 : used_tau) made = e.join(split(nd.a, t1), split(nd.b, t2), made);
                break;
            }
            node_map[static_cast<std::size_t>(idx)] = made;
        }
        e.set_root(node_map[static_cast<std::size_t>(expr->root())]);
        b.add_expression(e);
        hat_base = expr->max_label() * span;
        for (const auto& [label, imgs] : images_by_label)
            for (int x : imgs)
                if (x >= 0) root_classes.emplace_back(split(label, x + 1), x);
    }

    for (int u = 0; u < nu; ++u) b.add_vertex(hat_base + 1 + u, hats[static_cast<std::size_t>(u)]);
    for (auto [u, v] : h.edges()) b.join(hat_base + 1 + u, hat_base + 1 + v);
    for (auto [label, x] : root_classes)
        for (int u : h.neighbors(x)) b.join(label, hat_base + 1 + u);
    out.expr = std::move(b).finish();

    if (!same_vertices_and_edges(evaluate(*out.expr).graph, out.graph))
        throw Error("internal: wrapped expression does not define the wrapped graph");
    return out;
}

// ---------------------------------------------------------------------------
// the CSP reduction

namespace {

class ReductionBuilder {
public:
    ReductionBuilder(ReductionOutput& out, const SplitTarget& st, bool to_hom, int hat_label_base)
        : out_(out), st_(st), to_hom_(to_hom), hat_label_base_(hat_label_base) {}

    void add_hats() {
        for (int u = 0; u < st_.target.order(); ++u) {
            out_.hat_vertex.push_back(static_cast<int>(ids_.size()));
            ids_.push_back("hat_" + st_.target.vertex_id(u));
            partial_.push_back(-1);
            expr_.add_vertex(hat_label_base_ + u, ids_.back());
        }
        for (auto [u, v] : st_.target.edges()) {
            expr_.join(hat_label_base_ + u, hat_label_base_ + v);
            edges_.emplace_back(out_.hat_vertex[static_cast<std::size_t>(u)], out_.hat_vertex[static_cast<std::size_t>(v)]);
        }
    }

    int add_vertex(std::string id, int label, int prescribed) {
        int v = static_cast<int>(ids_.size());
        ids_.push_back(std::move(id));
        partial_.push_back(prescribed);
        expr_.add_vertex(label, ids_.back());
        if (to_hom_ && prescribed >= 0) {
            for (int u : st_.target.neighbors(prescribed)) {
                expr_.join(label, hat_label_base_ + u);
                edges_.emplace_back(v, out_.hat_vertex[static_cast<std::size_t>(u)]);
            }
        }
        return v;
    }

    void join(int i, int j) { expr_.join(i, j); }
    void relabel(int from, int to) {
        if (from != to) expr_.relabel(from, to);
    }
    void edge(int u, int v) { edges_.emplace_back(u, v); }

    void finish() {
        out_.graph = Graph::from_edges("G_phi", std::move(ids_), edges_);
        out_.partial = std::move(partial_);
        out_.expr = std::move(expr_).finish();
    }

private:
    ReductionOutput& out_;
    const SplitTarget& st_;
    bool to_hom_;
    int hat_label_base_;
    std::vector<std::string> ids_;
    std::vector<std::pair<int, int>> edges_;
    Mapping partial_;
    LinearExpressionBuilder expr_;
};

void validate_for_reduction(const CSPInstance& csp) {
    if (csp.n < 1) throw PreconditionError("CSP needs at least one variable");
    if (csp.constraints.empty()) throw PreconditionError("CSP needs at least one constraint");
    for (const auto& c : csp.constraints) {
        if (c.vars.empty()) throw PreconditionError("constraint without variables");
        std::set<int> distinct(c.vars.begin(), c.vars.end());
        if (distinct.size() != c.vars.size()) throw PreconditionError("a variable repeats inside one constraint");
        for (int v : c.vars)
            if (v < 0 || v >= csp.n) throw PreconditionError("constraint variable out of range");
        for (const auto& t : c.allowed) {
            if (t.size() != c.vars.size()) throw PreconditionError("allowed tuple has the wrong arity");
            for (int y : t)
                if (y < 1 || y > csp.domain) throw PreconditionError("allowed value out of range");
        }
    }
}

} // namespace

ReductionOutput reduce_csp(const CSPInstance& csp, const Factorization& f, const ReductionOptions& options) {
    validate_for_reduction(csp);
    SplitTarget st(f);
    const Graph& h1 = st.h1;
    if (h1.order() < 3) throw PreconditionError("first factor needs at least 3 vertices");
    if (is_trivial(h1)) throw PreconditionError("first factor is trivial");
    auto family = SignatureFamily::build(h1);
    if (static_cast<std::size_t>(csp.domain) != family.size())
        throw PreconditionError("domain size " + std::to_string(csp.domain) + " differs from s(H1) = " +
                                std::to_string(family.size()));
    auto w_edges = st.w.edges();
    if (w_edges.empty()) throw PreconditionError("W has no edge");
    if (options.to_hom) require_nontrivial_core(st.target);

    ReductionOutput out;
    out.csp = csp;
    out.factors = f;
    out.target = st.target;
    auto& meta = out.meta;
    meta.n = csp.n;
    meta.m = static_cast<int>(csp.constraints.size());
    meta.domain = csp.domain;
    meta.arity = csp.arity();
    meta.a = 0;
    meta.b = 1;
    meta.c = 2;
    meta.w = w_edges[0].first;
    meta.w_prime = w_edges[0].second;
    meta.lambda = family.sets();
    meta.to_hom = options.to_hom;
    meta.full_blocks = meta.m * (csp.n * h1.order() + 1);
    const int nu = st.target.order();

    const bool empty_constraint = std::any_of(csp.constraints.begin(), csp.constraints.end(),
                                              [](const CSPConstraint& c) { return c.allowed.empty(); });
    if (empty_constraint) {
        meta.empty_constraint = true;
        meta.blocks = 0;
        const int aw = st.vertex(meta.a, meta.w);
        std::pair<int, int> e{0, 1};
        Graph g = Graph::from_edges("G_phi", {"unsat.0", "unsat.1"}, std::span(&e, 1));
        KExpression x;
        x.set_root(x.join(1, 2, x.unite(x.intro(1, "unsat.0"), x.intro(2, "unsat.1"))));
        Mapping pre{aw, aw};
        if (options.to_hom) {
            auto wrapped = homext_to_hom(g, pre, st.target, &x);
            out.graph = std::move(wrapped.graph);
            out.expr = std::move(*wrapped.expr);
            out.hat_vertex = wrapped.hat_vertex;
            pre.resize(static_cast<std::size_t>(out.graph.order()), -1);
            meta.hom_labels = nu;
        } else {
            out.graph = std::move(g);
            out.expr = std::move(x);
        }
        out.partial = std::move(pre);
        meta.main_labels = 0;
        meta.constraint_work_labels = 2;
        return out;
    }

    if (options.blocks_override) {
        if (*options.blocks_override < 1) throw PreconditionError("block count must be positive");
        meta.blocks = *options.blocks_override;
    } else {
        meta.blocks = meta.full_blocks;
    }
    meta.forward_only = meta.blocks < meta.full_blocks;

    const int a = meta.a, w = meta.w, w_prime = meta.w_prime;

    // gadget templates
    std::map<int, std::size_t> or_template;
    std::map<std::pair<int, bool>, std::size_t> imp_template; // (d, is U-set)
    auto get_or = [&](int t) {
        auto it = or_template.find(t);
        if (it != or_template.end()) return it->second;
        out.templates.push_back(or_gadget(st, meta.a, meta.b, meta.c, w, t));
        return or_template[t] = out.templates.size() - 1;
    };
    auto get_imp = [&](int d, bool u_set) {
        auto key = std::make_pair(d, u_set);
        auto it = imp_template.find(key);
        if (it != imp_template.end()) return it->second;
        out.templates.push_back(implication_gadget(st, a, d, w, u_set ? w_prime : w));
        return imp_template[key] = out.templates.size() - 1;
    };
    auto lambda = [&](int y) { return family.set(static_cast<std::size_t>(y - 1)); };
    auto s_lambda = [&](int y) { return signature_of(h1, lambda(y)); };

    // label budgets from the exact gadget sizes
    int constraint_work = 0;
    std::vector<int> incidence_work(static_cast<std::size_t>(meta.arity), 0);
    for (const auto& c : csp.constraints) {
        constraint_work = std::max(constraint_work, out.templates[get_or(static_cast<int>(c.allowed.size()))].graph.order());
        for (std::size_t pos = 0; pos < c.vars.size(); ++pos) {
            int need = 0;
            for (const auto& tuple : c.allowed) {
                for (int d : set_members(lambda(tuple[pos]))) need += out.templates[get_imp(d, false)].graph.order() - 1;
                for (int d : set_members(s_lambda(tuple[pos]))) need += out.templates[get_imp(d, true)].graph.order() - 1;
            }
            incidence_work[pos] = std::max(incidence_work[pos], need);
        }
    }
    const int done = csp.n + 1;
    const int cw_base = csp.n + 2;
    std::vector<int> inc_base(incidence_work.size());
    int next = cw_base + constraint_work;
    for (std::size_t pos = 0; pos < incidence_work.size(); ++pos) {
        inc_base[pos] = next;
        next += incidence_work[pos];
    }
    meta.main_labels = csp.n;
    meta.done_labels = 1;
    meta.constraint_work_labels = constraint_work;
    for (int x : incidence_work) meta.incidence_work_labels += x;
    meta.hom_labels = options.to_hom ? nu : 0;

    ReductionBuilder rb(out, st, options.to_hom, next);
    if (options.to_hom) rb.add_hats();

    std::vector<std::vector<int>> history(static_cast<std::size_t>(csp.n)); // W^j_i
    std::vector<int> label_of_vertex; // only meaningful while a vertex holds a work label
    auto set_label = [&](int v, int label) {
        if (static_cast<int>(label_of_vertex.size()) <= v) label_of_vertex.resize(static_cast<std::size_t>(v) + 1, 0);
        label_of_vertex[static_cast<std::size_t>(v)] = label;
    };

    for (int j = 0; j < meta.blocks; ++j) {
        const auto& c = csp.constraints[static_cast<std::size_t>(j % meta.m)];
        const int t = static_cast<int>(c.allowed.size());
        const std::string blk = "blk" + std::to_string(j);

        // or-gadget, one constraint-work label per vertex
        const std::size_t or_idx = get_or(t);
        const GadgetInstance& org = out.templates[or_idx];
        PlacedGadget placed_or{or_idx, {}};
        for (int x = 0; x < org.graph.order(); ++x) {
            int v = rb.add_vertex(blk + ".or." + org.graph.vertex_id(x), cw_base + x, org.partial[static_cast<std::size_t>(x)]);
            set_label(v, cw_base + x);
            placed_or.vertex_of.push_back(v);
        }
        for (auto [x, y] : org.graph.edges()) {
            rb.join(cw_base + x, cw_base + y);
            rb.edge(placed_or.vertex_of[static_cast<std::size_t>(x)], placed_or.vertex_of[static_cast<std::size_t>(y)]);
        }
        std::vector<int> roots;
        for (int r : org.roots) roots.push_back(placed_or.vertex_of[static_cast<std::size_t>(r)]);
        out.block_roots.push_back(roots);
        out.gadgets.push_back(std::move(placed_or));

        std::vector<std::pair<int, int>> v_labels; // (label, variable)
        for (std::size_t pos = 0; pos < c.vars.size(); ++pos) {
            const int i = c.vars[pos];
            int lab = inc_base[pos];
            std::vector<int> u_labels, interior_labels;
            std::vector<int> u_vertices;

            auto place_implication = [&](std::size_t tmpl, int root, int z, const std::string& zid) {
                const GadgetInstance& g = out.templates[tmpl];
                PlacedGadget pg{tmpl, std::vector<int>(static_cast<std::size_t>(g.graph.order()), -1)};
                pg.vertex_of[static_cast<std::size_t>(g.p)] = root;
                pg.vertex_of[static_cast<std::size_t>(g.q)] = z;
                for (int x = 0; x < g.graph.order(); ++x) {
                    if (x == g.p || x == g.q) continue;
                    int v = rb.add_vertex(zid + ".imp_" + dots_to_underscores(g.graph.vertex_id(x)), lab,
                                          g.partial[static_cast<std::size_t>(x)]);
                    set_label(v, lab);
                    interior_labels.push_back(lab++);
                    pg.vertex_of[static_cast<std::size_t>(x)] = v;
                }
                for (auto [x, y] : g.graph.edges()) {
                    int gx = pg.vertex_of[static_cast<std::size_t>(x)], gy = pg.vertex_of[static_cast<std::size_t>(y)];
                    rb.join(label_of_vertex[static_cast<std::size_t>(gx)], label_of_vertex[static_cast<std::size_t>(gy)]);
                    rb.edge(gx, gy);
                }
                out.gadgets.push_back(std::move(pg));
            };

            for (int k = 0; k < t; ++k) {
                const int y = c.allowed[static_cast<std::size_t>(k)][pos];
                IncidenceSets inc;
                inc.block = j;
                inc.var = i;
                inc.tuple = k;
                inc.value = y;
                const std::string prefix = blk + ".v" + std::to_string(i + 1) + ".a" + std::to_string(k + 1);
                int idx = 0;
                for (int d : set_members(lambda(y))) {
                    const std::string zid = prefix + ".V" + std::to_string(++idx);
                    int z = rb.add_vertex(zid, lab, -1);
                    set_label(z, lab);
                    v_labels.emplace_back(lab++, i);
                    inc.v_set.push_back(z);
                    inc.v_designated.push_back(d);
                    place_implication(get_imp(d, false), roots[static_cast<std::size_t>(k)], z, zid);
                }
                idx = 0;
                for (int d : set_members(s_lambda(y))) {
                    const std::string zid = prefix + ".U" + std::to_string(++idx);
                    int z = rb.add_vertex(zid, lab, -1);
                    set_label(z, lab);
                    u_labels.push_back(lab++);
                    u_vertices.push_back(z);
                    inc.u_set.push_back(z);
                    inc.u_designated.push_back(d);
                    place_implication(get_imp(d, true), roots[static_cast<std::size_t>(k)], z, zid);
                }
                out.incidences.push_back(std::move(inc));
            }

            for (int ul : u_labels) rb.join(ul, i + 1);
            for (int u : u_vertices)
                for (int v : history[static_cast<std::size_t>(i)]) rb.edge(u, v);
            for (int ul : u_labels) rb.relabel(ul, done);
            for (int il : interior_labels) rb.relabel(il, done);
        }

        for (auto [vl, i] : v_labels) rb.relabel(vl, i + 1);
        for (std::size_t r = out.incidences.size(); r-- > 0 && out.incidences[r].block == j;)
            for (int v : out.incidences[r].v_set) history[static_cast<std::size_t>(out.incidences[r].var)].push_back(v);
        for (int x = 0; x < org.graph.order(); ++x) rb.relabel(cw_base + x, done);
    }
    rb.finish();
    return out;
}

Mapping build_forward_witness(const ReductionOutput& red, const std::vector<int>& assignment) {
    const auto& meta = red.meta;
    if (static_cast<int>(assignment.size()) != meta.n)
        throw PreconditionError("assignment has " + std::to_string(assignment.size()) + " values, CSP has " +
                                std::to_string(meta.n) + " variables");
    for (int y : assignment)
        if (y < 1 || y > meta.domain) throw PreconditionError("assignment value out of range");
    if (meta.empty_constraint || !red.csp.satisfied_by(assignment))
        throw PreconditionError("assignment violates a constraint");

    SplitTarget st(red.factors);
    const int a = meta.a, b = meta.b, c = meta.c, w = meta.w, w_prime = meta.w_prime;
    Mapping h(static_cast<std::size_t>(red.graph.order()), -1);

    // selected tuple per block: the one that agrees with the assignment everywhere
    std::vector<int> selected(red.block_roots.size(), -1);
    {
        std::vector<std::map<int, bool>> agrees(red.block_roots.size());
        for (const auto& inc : red.incidences) {
            auto& slot = agrees[static_cast<std::size_t>(inc.block)].try_emplace(inc.tuple, true).first->second;
            slot = slot && assignment[static_cast<std::size_t>(inc.var)] == inc.value;
        }
        for (std::size_t j = 0; j < agrees.size(); ++j) {
            for (const auto& [k, ok] : agrees[j])
                if (ok) {
                    selected[j] = k;
                    break;
                }
            if (selected[j] < 0) throw Error("internal: no allowed tuple matches a satisfying assignment");
        }
    }

    for (std::size_t j = 0; j < red.block_roots.size(); ++j) {
        const auto& roots = red.block_roots[j];
        const int k = selected[j];
        const int t = static_cast<int>(roots.size());
        for (int l = 0; l < t; ++l) {
            int x = l == k ? a : (t == 2 ? b : (l < k ? c : b));
            h[static_cast<std::size_t>(roots[static_cast<std::size_t>(l)])] = st.vertex(x, w);
        }
    }

    auto family = SignatureFamily::build(st.h1);
    for (const auto& inc : red.incidences) {
        const bool chosen = inc.tuple == selected[static_cast<std::size_t>(inc.block)];
        const int y = assignment[static_cast<std::size_t>(inc.var)];
        const VertexSet lam = family.set(static_cast<std::size_t>(y - 1));
        const int v_any = set_members(lam).front();
        const int u_any = set_members(signature_of(st.h1, lam)).front();
        for (std::size_t r = 0; r < inc.v_set.size(); ++r)
            h[static_cast<std::size_t>(inc.v_set[r])] = st.vertex(chosen ? inc.v_designated[r] : v_any, w);
        for (std::size_t r = 0; r < inc.u_set.size(); ++r)
            h[static_cast<std::size_t>(inc.u_set[r])] = st.vertex(chosen ? inc.u_designated[r] : u_any, w_prime);
    }

    for (const auto& pg : red.gadgets) {
        const auto& g = red.templates[pg.template_index];
        if (g.kind == "or") {
            for (std::size_t l = 0; l < g.links.size(); ++l) {
                std::vector<int> global_of;
                for (int x : g.link_vertex[l]) global_of.push_back(pg.vertex_of[static_cast<std::size_t>(x)]);
                fill_by_projection(st, g.links[l], global_of, h);
            }
        } else {
            fill_by_projection(st, g, pg.vertex_of, h);
        }
    }
    for (std::size_t u = 0; u < red.hat_vertex.size(); ++u) h[static_cast<std::size_t>(red.hat_vertex[u])] = static_cast<int>(u);

    for (int v = 0; v < red.graph.order(); ++v) {
        int img = h[static_cast<std::size_t>(v)];
        if (img < 0) throw Error("internal: vertex '" + red.graph.vertex_id(v) + "' left unassigned");
        int pre = v < static_cast<int>(red.partial.size()) ? red.partial[static_cast<std::size_t>(v)] : -1;
        if (pre >= 0 && pre != img) throw Error("internal: witness disagrees with the prescription at '" + red.graph.vertex_id(v) + "'");
    }
    for (auto [u, v] : red.graph.edges())
        if (!red.target.has_edge(h[static_cast<std::size_t>(u)], h[static_cast<std::size_t>(v)]))
            throw Error("internal: witness breaks the edge " + red.graph.vertex_id(u) + " - " + red.graph.vertex_id(v));
    return h;
}

} // namespace homcw
