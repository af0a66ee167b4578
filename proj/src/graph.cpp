#include "homcw/graph.hpp"

#include "homcw/error.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace homcw {

Graph::Graph(std::string name, bool loops_allowed) : name_(std::move(name)), loops_allowed_(loops_allowed) {}

Graph Graph::from_edges(std::string name, std::vector<std::string> vertex_ids,
                        std::span<const std::pair<int, int>> edges, bool loops_allowed) {
    Graph g(std::move(name), loops_allowed);
    g.ids_.reserve(vertex_ids.size());
    for (auto& id : vertex_ids) {
        auto [it, inserted] = g.index_.emplace(id, static_cast<int>(g.ids_.size()));
        if (!inserted) throw Error("duplicate vertex '" + id + "'");
        g.ids_.push_back(std::move(id));
    }
    const int n = g.order();
    g.adj_.assign(static_cast<std::size_t>(n), {});
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw Error("edge endpoint out of range");
        if (u == v && !loops_allowed) throw Error("loop at '" + g.ids_[static_cast<std::size_t>(u)] + "' in a simple graph");
        g.adj_[static_cast<std::size_t>(u)].push_back(v);
        if (u != v) g.adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    std::size_t endpoint_total = 0;
    std::size_t loops = 0;
    for (int v = 0; v < n; ++v) {
        auto& list = g.adj_[static_cast<std::size_t>(v)];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        endpoint_total += list.size();
        if (std::binary_search(list.begin(), list.end(), v)) ++loops;
    }
    g.edge_count_ = (endpoint_total - loops) / 2 + loops;
    g.rebuild_masks();
    return g;
}

int Graph::add_vertex(std::string id) {
    auto [it, inserted] = index_.emplace(id, order());
    if (!inserted) throw Error("duplicate vertex '" + id + "'");
    ids_.push_back(std::move(id));
    adj_.emplace_back();
    if (order() <= 64) {
        masks_.push_back(0);
    } else {
        masks_.clear();
    }
    return order() - 1;
}

bool Graph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= order() || v >= order()) throw Error("edge endpoint out of range");
    if (u == v && !loops_allowed_) throw Error("loop at '" + vertex_id(u) + "' in a simple graph");
    auto& lu = adj_[static_cast<std::size_t>(u)];
    auto pos = std::lower_bound(lu.begin(), lu.end(), v);
    if (pos != lu.end() && *pos == v) return false;
    lu.insert(pos, v);
    if (u != v) {
        auto& lv = adj_[static_cast<std::size_t>(v)];
        lv.insert(std::lower_bound(lv.begin(), lv.end(), u), u);
    }
    if (!masks_.empty()) {
        masks_[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
        masks_[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
    }
    ++edge_count_;
    return true;
}

bool Graph::has_edge(int u, int v) const {
    if (!masks_.empty()) return (masks_[static_cast<std::size_t>(u)] >> v) & 1U;
    const auto& lu = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(lu.begin(), lu.end(), v);
}

std::uint64_t Graph::neighbor_mask(int v) const {
    if (masks_.empty()) throw CapExceeded("neighbor masks need at most 64 vertices, graph '" + name_ + "' has " +
                                          std::to_string(order()));
    return masks_[static_cast<std::size_t>(v)];
}

std::optional<int> Graph::find_vertex(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int Graph::vertex(std::string_view id) const {
    auto v = find_vertex(id);
    if (!v) throw Error("unknown vertex '" + std::string(id) + "' in graph '" + name_ + "'");
    return *v;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int u = 0; u < order(); ++u)
        for (int v : adj_[static_cast<std::size_t>(u)])
            if (u <= v) out.emplace_back(u, v);
    return out;
}

void Graph::rebuild_masks() {
    masks_.clear();
    if (order() > 64) return;
    masks_.assign(static_cast<std::size_t>(order()), 0);
    for (int u = 0; u < order(); ++u)
        for (int v : adj_[static_cast<std::size_t>(u)]) masks_[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
}

bool operator==(const Graph& a, const Graph& b) {
    return a.name_ == b.name_ && a.loops_allowed_ == b.loops_allowed_ && a.ids_ == b.ids_ && a.adj_ == b.adj_;
}

// ---------------------------------------------------------------------------
// text format

bool same_vertices_and_edges(const Graph& a, const Graph& b) {
    if (a.order() != b.order() || a.edge_count() != b.edge_count()) return false;
    std::vector<int> to_b(static_cast<std::size_t>(a.order()));
    for (int v = 0; v < a.order(); ++v) {
        auto w = b.find_vertex(a.vertex_id(v));
        if (!w) return false;
        to_b[static_cast<std::size_t>(v)] = *w;
    }
    for (auto [u, v] : a.edges())
        if (!b.has_edge(to_b[static_cast<std::size_t>(u)], to_b[static_cast<std::size_t>(v)])) return false;
    return true;
}

bool is_valid_vertex_id(std::string_view id) {
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    });
}

namespace {

std::vector<std::string> split_words(std::string_view line) {
    std::vector<std::string> words;
    std::istringstream in{std::string(line)};
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

std::string_view strip_comment(std::string_view line) {
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    return line;
}

} // namespace

Graph parse_graph(std::string_view text) {
    std::optional<Graph> g;
    bool seen_edge = false;
    std::map<std::pair<int, int>, int> edge_lines;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = strip_comment(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        auto words = split_words(line);
        if (words.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (!g) {
            if (words.size() != 3 || words[0] != "graph")
                throw ParseError("expected header 'graph <name> <simple|loops>'", line_no);
            if (words[2] != "simple" && words[2] != "loops")
                throw ParseError("graph kind must be 'simple' or 'loops', got '" + words[2] + "'", line_no);
            g.emplace(words[1], words[2] == "loops");
        } else if (words[0] == "v") {
            if (words.size() != 2) throw ParseError("expected 'v <id>'", line_no);
            if (seen_edge) throw ParseError("vertex lines must precede edge lines", line_no);
            if (!is_valid_vertex_id(words[1])) throw ParseError("invalid vertex id '" + words[1] + "'", line_no);
            if (g->find_vertex(words[1])) throw ParseError("duplicate vertex '" + words[1] + "'", line_no);
            g->add_vertex(words[1]);
        } else if (words[0] == "e") {
            if (words.size() != 3) throw ParseError("expected 'e <id> <id>'", line_no);
            seen_edge = true;
            auto u = g->find_vertex(words[1]);
            auto v = g->find_vertex(words[2]);
            if (!u) throw ParseError("edge endpoint '" + words[1] + "' is not declared", line_no);
            if (!v) throw ParseError("edge endpoint '" + words[2] + "' is not declared", line_no);
            if (*u == *v && !g->loops_allowed())
                throw ParseError("loop at '" + words[1] + "' but header says 'simple'", line_no);
            auto key = std::minmax(*u, *v);
            if (auto [it, fresh] = edge_lines.emplace(key, line_no); !fresh)
                throw ParseError("duplicate edge " + words[1] + " " + words[2] + " (first on line " +
                                     std::to_string(it->second) + ")",
                                 line_no);
            g->add_edge(*u, *v);
        } else {
            throw ParseError("unknown directive '" + words[0] + "'", line_no);
        }
        if (end == text.size()) break;
    }
    if (!g) throw ParseError("missing 'graph' header", line_no);
    return std::move(*g);
}

std::string serialize_graph(const Graph& g) {
    std::string out = "graph " + g.name() + (g.loops_allowed() ? " loops\n" : " simple\n");
    for (const auto& id : g.vertex_ids()) out += "v " + id + "\n";
    for (auto [u, v] : g.edges()) out += "e " + g.vertex_id(u) + " " + g.vertex_id(v) + "\n";
    return out;
}

Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

void write_graph_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << serialize_graph(g);
}

// ---------------------------------------------------------------------------
// products and predicates

Graph direct_product(std::span<const Graph> factors) {
    if (factors.empty()) throw PreconditionError("direct product of an empty factor list");
    std::size_t total = 1;
    for (const auto& f : factors) {
        if (f.order() == 0) throw PreconditionError("direct product with empty factor '" + f.name() + "'");
        total *= static_cast<std::size_t>(f.order());
        if (total > 50'000'000) throw CapExceeded("direct product too large");
    }
    const std::size_t m = factors.size();
    std::vector<std::size_t> stride(m, 1);
    for (std::size_t i = m - 1; i > 0; --i) stride[i - 1] = stride[i] * static_cast<std::size_t>(factors[i].order());

    std::vector<std::string> ids(total);
    std::vector<int> coord(m, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::string id;
        for (std::size_t i = 0; i < m; ++i) {
            if (i) id += '.';
            id += factors[i].vertex_id(coord[i]);
        }
        ids[idx] = std::move(id);
        for (std::size_t i = m; i-- > 0;) {
            if (++coord[i] < factors[i].order()) break;
            coord[i] = 0;
        }
    }

    bool loops = true;
    std::string name;
    for (std::size_t i = 0; i < m; ++i) {
        loops = loops && factors[i].loops_allowed();
        if (i) name += "x";
        name += factors[i].name();
    }

    std::vector<std::pair<int, int>> edges;
    std::fill(coord.begin(), coord.end(), 0);
    std::vector<std::size_t> pick(m, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        // enumerate the Cartesian product of the coordinate neighbor lists
        bool any_empty = false;
        for (std::size_t i = 0; i < m; ++i) {
            pick[i] = 0;
            if (factors[i].neighbors(coord[i]).empty()) any_empty = true;
        }
        while (!any_empty) {
            std::size_t nbr = 0;
            for (std::size_t i = 0; i < m; ++i)
                nbr += stride[i] * static_cast<std::size_t>(factors[i].neighbors(coord[i])[pick[i]]);
            if (nbr >= idx) edges.emplace_back(static_cast<int>(idx), static_cast<int>(nbr));
            bool wrapped = true;
            for (std::size_t i = m; i-- > 0;) {
                if (++pick[i] < factors[i].neighbors(coord[i]).size()) {
                    wrapped = false;
                    break;
                }
                pick[i] = 0;
            }
            if (wrapped) break;
        }
        for (std::size_t i = m; i-- > 0;) {
            if (++coord[i] < factors[i].order()) break;
            coord[i] = 0;
        }
    }
    return Graph::from_edges(std::move(name), std::move(ids), edges, loops);
}

Graph direct_product(const Graph& a, const Graph& b) {
    const Graph pair[2] = {a, b};
    return direct_product(std::span<const Graph>(pair, 2));
}

bool has_loop(const Graph& g) {
    for (int v = 0; v < g.order(); ++v)
        if (g.has_loop(v)) return true;
    return false;
}

bool is_bipartite(const Graph& g) {
    std::vector<int> side(static_cast<std::size_t>(g.order()), -1);
    for (int s = 0; s < g.order(); ++s) {
        if (side[static_cast<std::size_t>(s)] >= 0) continue;
        side[static_cast<std::size_t>(s)] = 0;
        std::queue<int> todo;
        todo.push(s);
        while (!todo.empty()) {
            int u = todo.front();
            todo.pop();
            for (int v : g.neighbors(u)) {
                if (side[static_cast<std::size_t>(v)] < 0) {
                    side[static_cast<std::size_t>(v)] = 1 - side[static_cast<std::size_t>(u)];
                    todo.push(v);
                } else if (side[static_cast<std::size_t>(v)] == side[static_cast<std::size_t>(u)]) {
                    return false; // covers loops too
                }
            }
        }
    }
    return true;
}

std::vector<std::vector<int>> component_vertex_sets(const Graph& g) {
    std::vector<int> seen(static_cast<std::size_t>(g.order()), 0);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < g.order(); ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        std::vector<int> comp{s};
        seen[static_cast<std::size_t>(s)] = 1;
        for (std::size_t head = 0; head < comp.size(); ++head)
            for (int v : g.neighbors(comp[head]))
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    comp.push_back(v);
                }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

bool is_connected(const Graph& g) { return component_vertex_sets(g).size() <= 1; }

std::vector<Graph> connected_components(const Graph& g) {
    std::vector<Graph> out;
    int k = 0;
    for (const auto& comp : component_vertex_sets(g)) {
        out.push_back(induced_subgraph(g, comp));
        out.back().set_name(g.name() + "_c" + std::to_string(k++));
    }
    return out;
}

bool is_ramified(const Graph& g) {
    for (int u = 0; u < g.order(); ++u)
        for (int v = 0; v < g.order(); ++v) {
            if (u == v) continue;
            const auto& nu = g.neighbors(u);
            const auto& nv = g.neighbors(v);
            if (std::includes(nv.begin(), nv.end(), nu.begin(), nu.end())) return false;
        }
    return true;
}

Graph induced_subgraph(const Graph& g, std::span<const int> keep) {
    std::vector<int> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> pos(static_cast<std::size_t>(g.order()), -1);
    std::vector<std::string> ids;
    for (int v : sorted) {
        if (v < 0 || v >= g.order()) throw Error("induced subgraph: vertex index out of range");
        pos[static_cast<std::size_t>(v)] = static_cast<int>(ids.size());
        ids.push_back(g.vertex_id(v));
    }
    std::vector<std::pair<int, int>> edges;
    for (int v : sorted)
        for (int u : g.neighbors(v))
            if (u >= v && pos[static_cast<std::size_t>(u)] >= 0)
                edges.emplace_back(pos[static_cast<std::size_t>(v)], pos[static_cast<std::size_t>(u)]);
    return Graph::from_edges(g.name(), std::move(ids), edges, g.loops_allowed());
}

Graph induced_subgraph_by_id(const Graph& g, std::span<const std::string> keep) {
    std::vector<int> idx;
    idx.reserve(keep.size());
    for (const auto& id : keep) idx.push_back(g.vertex(id));
    return induced_subgraph(g, idx);
}

// ---------------------------------------------------------------------------
// isomorphism

namespace {

// Joint color refinement so that colors are comparable across both graphs.
std::pair<std::vector<int>, std::vector<int>> refine_colors(const Graph& a, const Graph& b) {
    auto initial = [](const Graph& g) {
        std::vector<long> c(static_cast<std::size_t>(g.order()));
        for (int v = 0; v < g.order(); ++v) c[static_cast<std::size_t>(v)] = g.degree(v) * 2 + (g.has_loop(v) ? 1 : 0);
        return c;
    };
    std::vector<long> ca = initial(a), cb = initial(b);
    for (int round = 0; round < 4; ++round) {
        std::map<std::vector<long>, long> palette;
        auto signature = [](const Graph& g, const std::vector<long>& c, int v) {
            std::vector<long> sig{c[static_cast<std::size_t>(v)]};
            for (int u : g.neighbors(v)) sig.push_back(c[static_cast<std::size_t>(u)]);
            std::sort(sig.begin() + 1, sig.end());
            return sig;
        };
        std::vector<std::vector<long>> sa, sb;
        for (int v = 0; v < a.order(); ++v) sa.push_back(signature(a, ca, v));
        for (int v = 0; v < b.order(); ++v) sb.push_back(signature(b, cb, v));
        for (auto& s : sa) palette.emplace(s, 0);
        for (auto& s : sb) palette.emplace(s, 0);
        long next = 0;
        for (auto& [k, val] : palette) val = next++;
        for (int v = 0; v < a.order(); ++v) ca[static_cast<std::size_t>(v)] = palette[sa[static_cast<std::size_t>(v)]];
        for (int v = 0; v < b.order(); ++v) cb[static_cast<std::size_t>(v)] = palette[sb[static_cast<std::size_t>(v)]];
    }
    return {std::vector<int>(ca.begin(), ca.end()), std::vector<int>(cb.begin(), cb.end())};
}

bool extend_iso(const Graph& a, const Graph& b, const std::vector<int>& order, std::size_t depth,
                const std::vector<int>& ca, const std::vector<int>& cb, std::vector<int>& map,
                std::vector<char>& used) {
    if (depth == order.size()) return true;
    int v = order[depth];
    for (int w = 0; w < b.order(); ++w) {
        if (used[static_cast<std::size_t>(w)] || ca[static_cast<std::size_t>(v)] != cb[static_cast<std::size_t>(w)])
            continue;
        if (a.has_loop(v) != b.has_loop(w)) continue;
        bool ok = true;
        for (std::size_t i = 0; i < depth && ok; ++i) {
            int u = order[i];
            ok = a.has_edge(u, v) == b.has_edge(map[static_cast<std::size_t>(u)], w);
        }
        if (!ok) continue;
        map[static_cast<std::size_t>(v)] = w;
        used[static_cast<std::size_t>(w)] = 1;
        if (extend_iso(a, b, order, depth + 1, ca, cb, map, used)) return true;
        used[static_cast<std::size_t>(w)] = 0;
    }
    map[static_cast<std::size_t>(v)] = -1;
    return false;
}

} // namespace

std::optional<std::vector<int>> find_isomorphism(const Graph& a, const Graph& b) {
    if (a.order() != b.order() || a.edge_count() != b.edge_count()) return std::nullopt;
    auto [ca, cb] = refine_colors(a, b);
    {
        auto sa = ca, sb = cb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return std::nullopt;
    }
    // visit order: greedy by connections to already placed vertices
    const int n = a.order();
    std::vector<int> order;
    std::vector<int> links(static_cast<std::size_t>(n), 0);
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (placed[static_cast<std::size_t>(v)]) continue;
            if (best < 0 || links[static_cast<std::size_t>(v)] > links[static_cast<std::size_t>(best)] ||
                (links[static_cast<std::size_t>(v)] == links[static_cast<std::size_t>(best)] &&
                 a.degree(v) > a.degree(best)))
                best = v;
        }
        placed[static_cast<std::size_t>(best)] = 1;
        order.push_back(best);
        for (int u : a.neighbors(best)) ++links[static_cast<std::size_t>(u)];
    }
    std::vector<int> map(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    if (!extend_iso(a, b, order, 0, ca, cb, map, used)) return std::nullopt;
    return map;
}

bool are_isomorphic(const Graph& a, const Graph& b) { return find_isomorphism(a, b).has_value(); }

// ---------------------------------------------------------------------------

namespace named {

Graph complete(int c) {
    Graph g("K" + std::to_string(c));
    for (int i = 1; i <= c; ++i) g.add_vertex(std::to_string(i));
    for (int i = 0; i < c; ++i)
        for (int j = i + 1; j < c; ++j) g.add_edge(i, j);
    return g;
}

Graph cycle(int n) {
    Graph g("C" + std::to_string(n));
    for (int i = 0; i < n; ++i) g.add_vertex(std::to_string(i));
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

Graph wheel(int n) {
    Graph g("W" + std::to_string(n));
    for (int i = 0; i <= n; ++i) g.add_vertex(std::to_string(i));
    for (int i = 1; i <= n; ++i) {
        g.add_edge(0, i);
        g.add_edge(i, i % n + 1);
    }
    return g;
}

Graph path(int n) {
    Graph g("P" + std::to_string(n));
    for (int i = 1; i <= n; ++i) g.add_vertex(std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph edgeless(int n) {
    Graph g("I" + std::to_string(n));
    for (int i = 1; i <= n; ++i) g.add_vertex(std::to_string(i));
    return g;
}

Graph loop_vertex() {
    Graph g("K1loop", true);
    g.add_vertex("l");
    g.add_edge(0, 0);
    return g;
}

} // namespace named

} // namespace homcw
