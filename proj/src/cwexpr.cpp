#include "homcw/cwexpr.hpp"

#include "homcw/error.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace homcw {

int KExpression::intro(int label, std::string vertex_id) {
    vertex_ids_.push_back(std::move(vertex_id));
    nodes_.push_back({NodeKind::intro, label, 0, static_cast<int>(vertex_ids_.size()) - 1, -1});
    root_ = static_cast<int>(nodes_.size()) - 1;
    return root_;
}

int KExpression::unite(int left, int right) {
    nodes_.push_back({NodeKind::unite, 0, 0, left, right});
    root_ = static_cast<int>(nodes_.size()) - 1;
    return root_;
}

int KExpression::relabel(int from, int to, int child) {
    nodes_.push_back({NodeKind::relabel, from, to, child, -1});
    root_ = static_cast<int>(nodes_.size()) - 1;
    return root_;
}

int KExpression::join(int i, int j, int child) {
    nodes_.push_back({NodeKind::join, i, j, child, -1});
    root_ = static_cast<int>(nodes_.size()) - 1;
    return root_;
}

std::optional<std::uint32_t> KExpression::source_offset(int idx) const {
    if (offsets_.size() != nodes_.size()) return std::nullopt;
    return offsets_[static_cast<std::size_t>(idx)];
}

std::vector<int> KExpression::labels_used() const {
    std::set<int> labels;
    for (const auto& n : nodes_) {
        if (n.kind == NodeKind::unite) continue;
        labels.insert(n.a);
        if (n.kind != NodeKind::intro) labels.insert(n.b);
    }
    return {labels.begin(), labels.end()};
}

int KExpression::width() const { return static_cast<int>(labels_used().size()); }

int KExpression::max_label() const {
    auto labels = labels_used();
    return labels.empty() ? 0 : labels.back();
}

void KExpression::validate() const {
    if (root_ < 0) throw Error("empty k-expression");
    std::vector<int> parents(nodes_.size(), 0);
    std::vector<int> intro_count(vertex_ids_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        auto check_child = [&](int c) {
            if (c < 0 || static_cast<std::size_t>(c) >= i) throw Error("node " + std::to_string(i) + " has an invalid child");
            ++parents[static_cast<std::size_t>(c)];
        };
        switch (n.kind) {
        case NodeKind::intro:
            if (n.a < 1) throw Error("label must be positive at vertex '" + vertex_ids_[static_cast<std::size_t>(n.left)] + "'");
            ++intro_count[static_cast<std::size_t>(n.left)];
            break;
        case NodeKind::unite:
            check_child(n.left);
            check_child(n.right);
            break;
        case NodeKind::relabel:
        case NodeKind::join:
            if (n.a < 1 || n.b < 1) throw Error("label must be positive");
            if (n.a == n.b)
                throw Error(std::string(n.kind == NodeKind::join ? "join" : "relabel") + " needs two distinct labels, got " +
                            std::to_string(n.a) + " twice");
            check_child(n.left);
            break;
        }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        int expected = static_cast<int>(i) == root_ ? 0 : 1;
        if (parents[i] != expected) throw Error("k-expression is not a tree (node " + std::to_string(i) + ")");
    }
    std::unordered_set<std::string_view> ids;
    for (std::size_t v = 0; v < vertex_ids_.size(); ++v) {
        if (intro_count[v] != 1) throw Error("vertex '" + vertex_ids_[v] + "' must be introduced exactly once");
        if (!ids.insert(vertex_ids_[v]).second) throw Error("duplicate vertex '" + vertex_ids_[v] + "'");
    }
}

// ---------------------------------------------------------------------------
// parsing and printing

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(std::string_view token) {
        for (char c : token) {
            if (peek() != c) fail("expected '" + std::string(token) + "'");
            ++pos_;
        }
    }

    int integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        if (start == pos_) fail("expected a label");
        if (pos_ - start > 9) fail("label too large");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
            if (!ok) break;
            ++pos_;
        }
        if (start == pos_) fail("expected a vertex id");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t offset() {
        skip_ws();
        return pos_;
    }

    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

    [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(what, line, col);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

enum class FrameKind { union_left, union_right, relabel, join };

struct Frame {
    FrameKind kind;
    int a = 0;
    int b = 0;
    int left = -1;
    std::size_t offset = 0;
};

} // namespace

KExpression parse_kexpr(std::string_view text) {
    Cursor cur(text);
    KExpression expr;
    std::vector<Frame> stack;
    std::unordered_map<std::string, std::size_t> seen;

    auto push_node = [&](std::size_t offset) { expr.offsets_.push_back(static_cast<std::uint32_t>(offset)); };

    for (;;) {
        // parse the start of an expression
        std::size_t at = cur.offset();
        char c = cur.peek();
        int value = -1;
        if (c == 'v') {
            cur.expect("v");
            cur.expect("(");
            std::size_t label_at = cur.offset();
            int label = cur.integer();
            if (label == 0) cur.fail_at(label_at, "label 0 is not allowed");
            cur.expect(",");
            std::string id = cur.identifier();
            cur.expect(")");
            if (auto [it, fresh] = seen.emplace(id, at); !fresh)
                cur.fail_at(at, "vertex '" + id + "' introduced twice");
            value = expr.intro(label, id);
            push_node(at);
        } else if (c == '(') {
            cur.expect("(");
            stack.push_back({FrameKind::union_left, 0, 0, -1, at});
            continue;
        } else if (c == 'r' || c == 'e') {
            cur.expect(std::string(1, c));
            cur.expect("(");
            std::size_t label_at = cur.offset();
            int i = cur.integer();
            cur.expect(c == 'r' ? "->" : ",");
            int j = cur.integer();
            cur.expect(")");
            cur.expect("{");
            if (i == 0 || j == 0) cur.fail_at(label_at, "label 0 is not allowed");
            if (i == j)
                cur.fail_at(label_at, std::string(c == 'r' ? "relabel" : "join") + " needs two distinct labels, got " +
                                          std::to_string(i) + " twice");
            stack.push_back({c == 'r' ? FrameKind::relabel : FrameKind::join, i, j, -1, at});
            continue;
        } else {
            cur.fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character '") + c + "'");
        }

        // reduce completed subexpressions
        bool need_expr = false;
        while (!stack.empty() && !need_expr) {
            Frame& top = stack.back();
            switch (top.kind) {
            case FrameKind::union_left:
                cur.expect("+");
                top.left = value;
                top.kind = FrameKind::union_right;
                need_expr = true;
                break;
            case FrameKind::union_right: {
                cur.expect(")");
                value = expr.unite(top.left, value);
                push_node(top.offset);
                stack.pop_back();
                break;
            }
            case FrameKind::relabel:
            case FrameKind::join: {
                cur.expect("}");
                value = top.kind == FrameKind::relabel ? expr.relabel(top.a, top.b, value) : expr.join(top.a, top.b, value);
                push_node(top.offset);
                stack.pop_back();
                break;
            }
            }
        }
        if (need_expr) continue;
        if (!cur.at_end()) cur.fail("trailing input after expression");
        expr.set_root(value);
        return expr;
    }
}

std::string print_kexpr(const KExpression& expr) {
    if (expr.empty()) return {};
    std::string out;
    std::vector<std::pair<int, int>> stack{{expr.root(), 0}};
    while (!stack.empty()) {
        auto [idx, phase] = stack.back();
        stack.pop_back();
        const auto& n = expr.node(idx);
        switch (n.kind) {
        case NodeKind::intro:
            out += "v(" + std::to_string(n.a) + "," + expr.vertex_id(n.left) + ")";
            break;
        case NodeKind::unite:
            if (phase == 0) {
                out += "(";
                stack.push_back({idx, 1});
                stack.push_back({n.left, 0});
            } else if (phase == 1) {
                out += "+";
                stack.push_back({idx, 2});
                stack.push_back({n.right, 0});
            } else {
                out += ")";
            }
            break;
        case NodeKind::relabel:
        case NodeKind::join:
            if (phase == 0) {
                out += n.kind == NodeKind::relabel ? "r(" + std::to_string(n.a) + "->" + std::to_string(n.b) + "){"
                                                   : "e(" + std::to_string(n.a) + "," + std::to_string(n.b) + "){";
                stack.push_back({idx, 1});
                stack.push_back({n.left, 0});
            } else {
                out += "}";
            }
            break;
        }
    }
    return out;
}

KExpression read_kexpr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open expression file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_kexpr(buf.str());
}

void write_kexpr_file(const KExpression& expr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << print_kexpr(expr) << "\n";
}

// ---------------------------------------------------------------------------
// evaluation

std::vector<int> LabeledGraph::class_of(int label) const {
    std::vector<int> out;
    for (std::size_t v = 0; v < label_of.size(); ++v)
        if (label_of[v] == label) out.push_back(static_cast<int>(v));
    return out;
}

namespace {

std::vector<int> post_order(const KExpression& expr) {
    std::vector<int> order;
    order.reserve(expr.size());
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
    return order;
}

struct LabelClass {
    std::vector<int> vertices;
    int pending = 0; // members still missing a final edge
};

using ClassMap = std::unordered_map<int, LabelClass>;

void absorb(LabelClass& into, LabelClass&& from) {
    if (into.vertices.size() < from.vertices.size()) std::swap(into.vertices, from.vertices);
    into.vertices.insert(into.vertices.end(), from.vertices.begin(), from.vertices.end());
    into.pending += from.pending;
}

// Drives the bottom-up evaluation. With `final_degree` set, per-node liveness
// is recorded against it.
struct Evaluator {
    const KExpression& expr;
    const std::vector<int>* final_degree = nullptr;
    std::vector<std::vector<int>>* live = nullptr;

    std::vector<std::pair<int, int>> edges{};
    std::vector<int> current_degree{};
    std::unordered_set<std::uint64_t> edge_set{};
    std::vector<int> label_of{};

    void run() {
        const int n = expr.vertex_count();
        label_of.assign(static_cast<std::size_t>(n), 0);
        if (final_degree) current_degree.assign(static_cast<std::size_t>(n), 0);
        std::vector<ClassMap> stack;
        for (int idx : post_order(expr)) {
            const auto& node = expr.node(idx);
            switch (node.kind) {
            case NodeKind::intro: {
                ClassMap m;
                auto& cls = m[node.a];
                cls.vertices.push_back(node.left);
                if (final_degree && (*final_degree)[static_cast<std::size_t>(node.left)] > 0) cls.pending = 1;
                stack.push_back(std::move(m));
                break;
            }
            case NodeKind::unite: {
                ClassMap right = std::move(stack.back());
                stack.pop_back();
                ClassMap& left = stack.back();
                if (left.size() < right.size()) std::swap(left, right);
                for (auto& [label, cls] : right) absorb(left[label], std::move(cls));
                break;
            }
            case NodeKind::relabel: {
                ClassMap& m = stack.back();
                auto it = m.find(node.a);
                if (it != m.end()) {
                    LabelClass moved = std::move(it->second);
                    m.erase(it);
                    absorb(m[node.b], std::move(moved));
                }
                break;
            }
            case NodeKind::join: {
                ClassMap& m = stack.back();
                auto ia = m.find(node.a);
                auto ib = m.find(node.b);
                if (ia != m.end() && ib != m.end()) join_classes(ia->second, ib->second);
                break;
            }
            }
            if (live) {
                std::vector<int> labels;
                for (const auto& [label, cls] : stack.back())
                    if (cls.pending > 0) labels.push_back(label);
                std::sort(labels.begin(), labels.end());
                (*live)[static_cast<std::size_t>(idx)] = std::move(labels);
            }
        }
        for (const auto& [label, cls] : stack.back())
            for (int v : cls.vertices) label_of[static_cast<std::size_t>(v)] = label;
    }

    void join_classes(LabelClass& a, LabelClass& b) {
        if (!final_degree) {
            for (int u : a.vertices)
                for (int v : b.vertices) edges.emplace_back(u, v);
            return;
        }
        for (int u : a.vertices)
            for (int v : b.vertices) {
                auto key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) | static_cast<std::uint32_t>(std::max(u, v));
                if (!edge_set.insert(key).second) continue;
                edges.emplace_back(u, v);
                if (++current_degree[static_cast<std::size_t>(u)] == (*final_degree)[static_cast<std::size_t>(u)]) --a.pending;
                if (++current_degree[static_cast<std::size_t>(v)] == (*final_degree)[static_cast<std::size_t>(v)]) --b.pending;
            }
    }
};

} // namespace

LabeledGraph evaluate(const KExpression& expr, std::string graph_name) {
    expr.validate();
    Evaluator ev{expr};
    ev.run();
    LabeledGraph out{Graph::from_edges(std::move(graph_name), expr.vertex_ids(), ev.edges), std::move(ev.label_of)};
    return out;
}

LivenessAnnotation annotate_liveness(const KExpression& expr) {
    LivenessAnnotation ann{{}, evaluate(expr)};
    std::vector<int> degree(static_cast<std::size_t>(expr.vertex_count()));
    for (int v = 0; v < expr.vertex_count(); ++v) degree[static_cast<std::size_t>(v)] = ann.final_graph.graph.degree(v);
    ann.live.assign(expr.size(), {});
    Evaluator ev{expr, &degree, &ann.live};
    ev.run();
    return ann;
}

// ---------------------------------------------------------------------------
// construction helpers

KExpression trivial_expression(const Graph& g) {
    if (has_loop(g)) throw PreconditionError("trivial_expression needs a loopless graph");
    LinearExpressionBuilder b;
    for (int v = 0; v < g.order(); ++v) {
        b.add_vertex(v + 1, g.vertex_id(v));
        for (int u : g.neighbors(v))
            if (u < v) b.join(u + 1, v + 1);
    }
    if (b.empty()) throw PreconditionError("trivial_expression of an empty graph");
    return std::move(b).finish();
}

KExpression sequential_expression(const Graph& g, std::vector<int> order) {
    if (has_loop(g)) throw PreconditionError("sequential_expression needs a loopless graph");
    if (order.empty()) {
        order.resize(static_cast<std::size_t>(g.order()));
        for (int v = 0; v < g.order(); ++v) order[static_cast<std::size_t>(v)] = v;
    }
    if (order.size() != static_cast<std::size_t>(g.order())) throw PreconditionError("vertex order must cover every vertex");
    std::vector<int> position(static_cast<std::size_t>(g.order()), -1);
    for (std::size_t i = 0; i < order.size(); ++i) position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    constexpr int dead = 1;
    std::vector<int> label(static_cast<std::size_t>(g.order()), 0);
    std::vector<int> missing(static_cast<std::size_t>(g.order()));
    for (int v = 0; v < g.order(); ++v) missing[static_cast<std::size_t>(v)] = g.degree(v);
    std::set<int> free_labels;
    int next_label = 2;
    auto take_label = [&] {
        if (!free_labels.empty()) {
            int l = *free_labels.begin();
            free_labels.erase(free_labels.begin());
            return l;
        }
        return next_label++;
    };

    LinearExpressionBuilder b;
    for (int v : order) {
        int lv = missing[static_cast<std::size_t>(v)] > 0 ? take_label() : dead;
        label[static_cast<std::size_t>(v)] = lv;
        b.add_vertex(lv, g.vertex_id(v));
        std::vector<int> finished;
        for (int u : g.neighbors(v)) {
            if (position[static_cast<std::size_t>(u)] >= position[static_cast<std::size_t>(v)]) continue;
            b.join(label[static_cast<std::size_t>(u)], lv);
            if (--missing[static_cast<std::size_t>(u)] == 0) finished.push_back(u);
            if (--missing[static_cast<std::size_t>(v)] == 0) finished.push_back(v);
        }
        for (int w : finished) {
            b.relabel(label[static_cast<std::size_t>(w)], dead);
            free_labels.insert(label[static_cast<std::size_t>(w)]);
            label[static_cast<std::size_t>(w)] = dead;
        }
    }
    if (b.empty()) throw PreconditionError("sequential_expression of an empty graph");
    return std::move(b).finish();
}

KExpression clique_expression(int n, std::string_view prefix) {
    if (n < 1) throw PreconditionError("clique_expression needs n >= 1");
    LinearExpressionBuilder b;
    b.add_vertex(1, std::string(prefix) + "1");
    for (int i = 2; i <= n; ++i) {
        b.add_vertex(2, std::string(prefix) + std::to_string(i));
        b.join(1, 2);
        b.relabel(2, 1);
    }
    return std::move(b).finish();
}

KExpression star_expression(int leaves) {
    if (leaves < 1) throw PreconditionError("star_expression needs at least one leaf");
    LinearExpressionBuilder b;
    for (int i = 1; i <= leaves; ++i) b.add_vertex(i, "l" + std::to_string(i));
    b.add_vertex(leaves + 1, "hub");
    for (int i = 1; i <= leaves; ++i) b.join(i, leaves + 1);
    return std::move(b).finish();
}

KExpression random_linear_expression(int vertices, int width, double join_probability, std::uint64_t seed) {
    if (vertices < 1 || width < 1) throw PreconditionError("random expression needs vertices and labels");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(1, width);
    std::bernoulli_distribution coin(join_probability);
    LinearExpressionBuilder b;
    for (int v = 0; v < vertices; ++v) {
        const int label = pick(rng);
        b.add_vertex(label, "v" + std::to_string(v));
        for (int other = 1; other <= width; ++other)
            if (other != label && coin(rng)) b.join(label, other);
        if (width > 1 && coin(rng)) {
            int from = pick(rng), to = pick(rng);
            if (from != to) b.relabel(from, to);
        }
    }
    return std::move(b).finish();
}

KExpression relabel_vertices(const KExpression& expr, const std::map<std::string, std::string>& renaming) {
    KExpression out;
    out.reserve(expr.size());
    std::unordered_set<std::string> used;
    for (const auto& n : expr.nodes()) {
        switch (n.kind) {
        case NodeKind::intro: {
            std::string id = expr.vertex_id(n.left);
            if (auto it = renaming.find(id); it != renaming.end()) id = it->second;
            if (!used.insert(id).second) throw Error("vertex renaming collision on '" + id + "'");
            out.intro(n.a, std::move(id));
            break;
        }
        case NodeKind::unite:
            out.unite(n.left, n.right);
            break;
        case NodeKind::relabel:
            out.relabel(n.a, n.b, n.left);
            break;
        case NodeKind::join:
            out.join(n.a, n.b, n.left);
            break;
        }
    }
    out.set_root(expr.root());
    return out;
}

KExpression restrict_expression(const KExpression& expr, const std::vector<char>& keep) {
    KExpression out;
    std::vector<int> mapped(expr.size(), -1);
    for (int idx : post_order(expr)) {
        const auto& n = expr.node(idx);
        int& m = mapped[static_cast<std::size_t>(idx)];
        switch (n.kind) {
        case NodeKind::intro:
            if (keep[static_cast<std::size_t>(n.left)]) m = out.intro(n.a, expr.vertex_id(n.left));
            break;
        case NodeKind::unite: {
            int l = mapped[static_cast<std::size_t>(n.left)];
            int r = mapped[static_cast<std::size_t>(n.right)];
            m = (l >= 0 && r >= 0) ? out.unite(l, r) : std::max(l, r);
            break;
        }
        case NodeKind::relabel:
        case NodeKind::join: {
            int c = mapped[static_cast<std::size_t>(n.left)];
            if (c >= 0) m = n.kind == NodeKind::relabel ? out.relabel(n.a, n.b, c) : out.join(n.a, n.b, c);
            break;
        }
        }
    }
    int root = mapped[static_cast<std::size_t>(expr.root())];
    if (root < 0) throw PreconditionError("restricting the expression removed every vertex");
    out.set_root(root);
    return out;
}

void LinearExpressionBuilder::add_vertex(int label, std::string id) {
    int n = expr_.intro(label, std::move(id));
    current_ = current_ < 0 ? n : expr_.unite(current_, n);
}

void LinearExpressionBuilder::join(int i, int j) {
    if (current_ < 0) throw PreconditionError("join on an empty expression");
    current_ = expr_.join(i, j, current_);
}

void LinearExpressionBuilder::relabel(int from, int to) {
    if (current_ < 0) throw PreconditionError("relabel on an empty expression");
    current_ = expr_.relabel(from, to, current_);
}

void LinearExpressionBuilder::add_expression(const KExpression& other) {
    if (other.empty()) return;
    std::vector<int> mapped(other.size(), -1);
    for (std::size_t i = 0; i < other.size(); ++i) {
        const auto& n = other.node(static_cast<int>(i));
        int m = -1;
        switch (n.kind) {
        case NodeKind::intro:
            m = expr_.intro(n.a, other.vertex_id(n.left));
            break;
        case NodeKind::unite:
            m = expr_.unite(mapped[static_cast<std::size_t>(n.left)], mapped[static_cast<std::size_t>(n.right)]);
            break;
        case NodeKind::relabel:
            m = expr_.relabel(n.a, n.b, mapped[static_cast<std::size_t>(n.left)]);
            break;
        case NodeKind::join:
            m = expr_.join(n.a, n.b, mapped[static_cast<std::size_t>(n.left)]);
            break;
        }
        mapped[i] = m;
    }
    int root = mapped[static_cast<std::size_t>(other.root())];
    current_ = current_ < 0 ? root : expr_.unite(current_, root);
}

KExpression LinearExpressionBuilder::finish() && {
    expr_.set_root(current_);
    return std::move(expr_);
}

} // namespace homcw
