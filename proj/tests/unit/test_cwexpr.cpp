#include "homcw/cwexpr.hpp"
#include "homcw/error.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <string>

using namespace homcw;

namespace {

void check_matches_graph(const KExpression& e, const Graph& g) {
    auto naive = oracle::naive_evaluate(e);
    auto want = oracle::naive_of(g);
    CHECK(naive.vertices == want.vertices);
    CHECK(naive.edges == want.edges);
}

int error_line(const std::string& text) {
    try {
        parse_kexpr(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("parse, print and evaluate a triangle") {
    auto e = parse_kexpr("r(2->1){e(1,2){(r(2->1){e(1,2){(v(1,a) + v(2,b))}} + v(2,c))}}");
    CHECK(e.width() == 2);
    CHECK(e.vertex_count() == 3);
    auto lg = evaluate(e);
    CHECK(lg.graph.edge_count() == 3);
    CHECK(lg.class_of(1).size() == 3);
    auto again = parse_kexpr(print_kexpr(e));
    CHECK(print_kexpr(again) == print_kexpr(e));
    check_matches_graph(e, lg.graph);
}

TEST_CASE("parser errors report positions") {
    CHECK(error_line("v(0,a)") == 1);
    CHECK(error_line("(v(1,a) +\n v(1,a))") == 2);
    CHECK(error_line("r(1->1){v(1,a)}") == 1);
    CHECK(error_line("e(2,2){v(1,a)}") == 1);
    CHECK(error_line("v(1,a) v(1,b)") == 1);
    CHECK(error_line("(v(1,a) +") == 1);
    CHECK(error_line("# only a comment\n") == 2);
    try {
        parse_kexpr("(v(1,a)\n   + v(1,a))");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() > 0);
        CHECK(std::string(e.what()).find("introduced twice") != std::string::npos);
    }
}

TEST_CASE("deep nesting does not recurse") {
    const int n = 20000;
    LinearExpressionBuilder b;
    for (int i = 0; i < n; ++i) {
        b.add_vertex(2, "x" + std::to_string(i));
        if (i) {
            b.join(2, 3);
            b.relabel(3, 1);
        }
        b.relabel(2, 3);
    }
    auto e = std::move(b).finish();
    auto text = print_kexpr(e);
    auto back = parse_kexpr(text);
    CHECK(back.size() == e.size());
    CHECK(evaluate(back).graph.edge_count() == static_cast<std::size_t>(n - 1));
}

TEST_CASE("generated expressions define their graphs") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 40; ++round) {
        Graph g = oracle::random_graph(1 + round % 10, 0.4, rng, "G");
        auto t = trivial_expression(g);
        CHECK(t.width() == g.order());
        check_matches_graph(t, g);
        auto s = sequential_expression(g);
        check_matches_graph(s, g);
        CHECK(s.width() <= g.order() + 1);
    }
    auto k5 = clique_expression(5, "k");
    CHECK(k5.width() == 2);
    CHECK(evaluate(k5).graph.edge_count() == 10);
}

TEST_CASE("star and random expressions") {
    auto s = star_expression(4);
    CHECK(s.width() == 5);
    auto g = evaluate(s).graph;
    CHECK(g.edge_count() == 4);
    for (int w = 1; w <= 5; ++w) {
        auto r = random_linear_expression(12, w, 0.3, 42 + static_cast<std::uint64_t>(w));
        CHECK(r.width() <= w);
        check_matches_graph(r, evaluate(r).graph);
    }
    CHECK(print_kexpr(random_linear_expression(8, 3, 0.5, 1)) == print_kexpr(random_linear_expression(8, 3, 0.5, 1)));
}

TEST_CASE("every label is live until its last missing edge") {
    auto e = parse_kexpr("e(1,3){(e(1,2){(v(1,a) + v(2,b))} + v(3,c))}");
    auto ann = annotate_liveness(e);
    // after a-b is placed b is finished, a still waits for c
    const auto& inner = ann.live[static_cast<std::size_t>(e.node(e.root()).left)];
    CHECK(inner == std::vector<int>{1, 3});
    CHECK(ann.live[static_cast<std::size_t>(e.root())].empty());
}

TEST_CASE("liveness agrees with a direct definition") {
    std::mt19937_64 rng(9);
    for (int round = 0; round < 30; ++round) {
        auto e = random_linear_expression(8, 3, 0.4, rng());
        auto ann = annotate_liveness(e);
        const auto& final_graph = ann.final_graph.graph;
        // recompute per node: label classes and edges present so far
        std::vector<std::vector<std::pair<int, int>>> members(e.size());
        std::vector<std::set<std::pair<int, int>>> edges(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            const auto& nd = e.node(static_cast<int>(i));
            if (nd.kind == NodeKind::intro) {
                members[i] = {{nd.left, nd.a}};
            } else if (nd.kind == NodeKind::unite) {
                members[i] = members[static_cast<std::size_t>(nd.left)];
                members[i].insert(members[i].end(), members[static_cast<std::size_t>(nd.right)].begin(), members[static_cast<std::size_t>(nd.right)].end());
                edges[i] = edges[static_cast<std::size_t>(nd.left)];
                edges[i].insert(edges[static_cast<std::size_t>(nd.right)].begin(), edges[static_cast<std::size_t>(nd.right)].end());
            } else {
                members[i] = members[static_cast<std::size_t>(nd.left)];
                edges[i] = edges[static_cast<std::size_t>(nd.left)];
                for (auto& [v, l] : members[i])
                    if (nd.kind == NodeKind::relabel && l == nd.a) l = nd.b;
                if (nd.kind == NodeKind::join)
                    for (auto [u, lu] : members[i])
                        for (auto [v, lv] : members[i])
                            if (lu == nd.a && lv == nd.b) edges[i].emplace(std::min(u, v), std::max(u, v));
            }
            std::set<int> live;
            for (auto [v, l] : members[i]) {
                int have = 0;
                for (auto [x, y] : edges[i]) have += (x == v) + (y == v);
                if (have < final_graph.degree(v)) live.insert(l);
            }
            CHECK(std::vector<int>(live.begin(), live.end()) == ann.live[i]);
        }
    }
}

TEST_CASE("restricting an expression gives the induced subgraph") {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 20; ++round) {
        Graph g = oracle::random_graph(7, 0.5, rng, "G");
        auto e = sequential_expression(g);
        std::vector<char> keep(static_cast<std::size_t>(e.vertex_count()));
        std::vector<std::string> kept;
        for (int v = 0; v < e.vertex_count(); ++v) {
            keep[static_cast<std::size_t>(v)] = (rng() % 2) || v == 0;
            if (keep[static_cast<std::size_t>(v)]) kept.push_back(e.vertex_id(v));
        }
        auto r = restrict_expression(e, keep);
        check_matches_graph(r, induced_subgraph_by_id(g, kept));
    }
}

TEST_CASE("relabeling vertex ids") {
    auto e = parse_kexpr("e(1,2){(v(1,a) + v(2,b))}");
    auto r = relabel_vertices(e, {{"a", "x"}});
    CHECK(r.vertex_id(0) == "x");
    CHECK_THROWS_AS(relabel_vertices(e, {{"a", "b"}}), Error);
}

TEST_CASE("empty-class joins and relabels are harmless") {
    auto e = parse_kexpr("e(3,4){r(5->6){v(1,a)}}");
    auto lg = evaluate(e);
    CHECK(lg.graph.order() == 1);
    CHECK(lg.graph.edge_count() == 0);
}

TEST_CASE("validation catches malformed arenas") {
    KExpression e;
    int a = e.intro(1, "a");
    int b = e.intro(2, "b");
    e.set_root(e.join(1, 2, e.unite(a, b)));
    CHECK_NOTHROW(e.validate());
    KExpression bad;
    bad.set_root(bad.intro(1, "a"));
    bad.unite(0, 0);
    bad.set_root(1);
    CHECK_THROWS_AS(bad.validate(), Error);
}
