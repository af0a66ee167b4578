#include "homcw/error.hpp"
#include "homcw/hardness_gen.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <set>

using namespace homcw;

namespace {

const Factorization& k3_factors() {
    static const Factorization f = factorize_prime(named::complete(3));
    return f;
}

std::set<VertexPair> pair_images(const SplitTarget& st, const GadgetInstance& g) {
    auto ext = enumerate_extensions(g.graph, st.target, g.partial, 1'000'000);
    REQUIRE_FALSE(ext.truncated);
    std::set<VertexPair> out;
    for (const auto& m : ext.mappings)
        out.emplace(st.h1_of(m[static_cast<std::size_t>(g.p)]), st.h1_of(m[static_cast<std::size_t>(g.q)]));
    return out;
}

} // namespace

TEST_CASE("a one-pair gadget over K3 is K3 itself") {
    SplitTarget st(k3_factors());
    auto g = s_gadget(st, {{0, 1}}, 0, 0);
    CHECK(g.graph.order() == 3);
    CHECK(are_isomorphic(g.graph, named::complete(3)));
    CHECK(g.p == 0);
    CHECK(g.q == 1);
    for (int v = 0; v < 3; ++v) CHECK(g.partial[static_cast<std::size_t>(v)] == v);
}

TEST_CASE("the swap gadget over K3 has exactly the two projections") {
    SplitTarget st(k3_factors());
    auto g = s_gadget(st, {{0, 1}, {1, 0}}, 0, 0);
    CHECK(g.graph.order() == 9);
    int fixed = 0;
    for (int x : g.partial) fixed += x >= 0;
    CHECK(fixed == 3);
    CHECK(g.partial[static_cast<std::size_t>(g.p)] == -1);
    CHECK(g.partial[static_cast<std::size_t>(g.q)] == -1);
    auto ext = enumerate_extensions(g.graph, st.target, g.partial, 1000);
    CHECK(ext.mappings.size() == 2);
    CHECK(pair_images(st, g) == std::set<VertexPair>{{0, 1}, {1, 0}});
}

TEST_CASE("S-gadget properties over K3 and C5 for small relations") {
    for (const Graph& h1 : {named::complete(3), named::cycle(5)}) {
        auto f = factorize_prime(h1);
        SplitTarget st(f);
        const int n = h1.order();
        std::vector<VertexPair> all;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) all.emplace_back(x, y);
        std::mt19937_64 rng(n);
        for (int round = 0; round < 12; ++round) {
            std::vector<VertexPair> s;
            const std::size_t size = 1 + round % 3;
            while (s.size() < size) {
                auto pr = all[rng() % all.size()];
                if (std::find(s.begin(), s.end(), pr) == s.end()) s.push_back(pr);
            }
            auto g = s_gadget(st, s, 0, 0);
            auto chk = verify_s_gadget(st, g);
            CHECK(chk.s1);
            CHECK(chk.s2);
        }
    }
}

TEST_CASE("implication gadget shape") {
    SplitTarget st(k3_factors());
    CHECK(implication_pairs(3, 0, 1).size() == 7);
    auto loop = implication_pairs(3, 0, 0);
    CHECK(std::find(loop.begin(), loop.end(), VertexPair{0, 0}) != loop.end());
    auto g = implication_gadget(st, 0, 1, 0, 0);
    CHECK(g.graph.order() == 2187);
    CHECK(g.kind == "implication");
    CHECK(g.partial[static_cast<std::size_t>(g.p)] == -1);
}

TEST_CASE("gadget construction errors") {
    SplitTarget st(k3_factors());
    CHECK_THROWS_AS(s_gadget(st, {}, 0, 0), PreconditionError);
    CHECK_THROWS_AS(s_gadget(st, {{0, 5}}, 0, 0), PreconditionError);
    CHECK_THROWS_AS(s_gadget(st, {{0, 1}}, 0, 3), PreconditionError);
    CHECK_THROWS_AS(or_gadget(st, 0, 1, 2, 0, 0), PreconditionError);
    CHECK_THROWS_AS(or_gadget(st, 0, 0, 2, 0, 3), PreconditionError);
}

TEST_CASE("or-gadgets over K3") {
    SplitTarget st(k3_factors());
    auto one = or_gadget(st, 0, 1, 2, 0, 1);
    CHECK(one.graph.order() == 1);
    CHECK(one.partial[0] == st.vertex(0, 0));

    auto two = or_gadget(st, 0, 1, 2, 0, 2);
    auto ext = enumerate_extensions(two.graph, st.target, two.partial, 100000);
    std::set<VertexPair> seen;
    for (const auto& m : ext.mappings) seen.emplace(st.h1_of(m[0]), st.h1_of(m[1]));
    CHECK(seen == std::set<VertexPair>{{0, 1}, {1, 0}, {0, 0}});

    for (int t = 1; t <= 4; ++t) {
        auto g = or_gadget(st, 0, 1, 2, 0, t);
        CHECK(static_cast<int>(g.roots.size()) == t);
        for (int r : g.roots) CHECK(g.graph.degree(r) >= (t == 1 ? 0 : 1));
        auto chk = verify_or_gadget(st, g);
        CHECK(chk.o1);
        CHECK(chk.o2);
    }
}

TEST_CASE("CSP text format") {
    auto csp = parse_csp("# tiny\ncsp 2 6\nconstraint x1 x2\nallow 1 2\nallow 3 4\nconstraint x2\nallow 5\n");
    CHECK(csp.n == 2);
    CHECK(csp.domain == 6);
    CHECK(csp.arity() == 2);
    CHECK(csp.constraints.size() == 2);
    CHECK(parse_csp(serialize_csp(csp)).constraints[0].allowed == csp.constraints[0].allowed);
    CHECK(csp.satisfied_by({1, 2}) == false);
    CHECK(csp.satisfied_by({3, 4}) == false);
    auto sol = csp.brute_force_solution();
    CHECK_FALSE(sol.has_value());

    auto ok = parse_csp("csp 1 6\nconstraint x1\n");
    CHECK(ok.constraints[0].allowed.empty());
    CHECK_FALSE(ok.brute_force_solution().has_value());

    auto line_of = [](const std::string& text) {
        try {
            parse_csp(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("csp 1\n") == 1);
    CHECK(line_of("csp 1 6\nallow 1\n") == 2);
    CHECK(line_of("csp 1 6\nconstraint x2\n") == 2);
    CHECK(line_of("csp 1 6\nconstraint x1\nallow 7\n") == 3);
    CHECK(line_of("csp 1 6\nconstraint x1\nallow 1 1\n") == 3);
    CHECK(line_of("csp 1 6\nconstraint x1\nallow 1\nallow 1\n") == 4);
    CHECK(line_of("csp 1 6\nconstraint y1\n") == 2);
    CHECK(line_of("") == 1);
}

TEST_CASE("wrapping extension instances into Hom instances") {
    auto k3 = named::complete(3);
    Graph v = Graph::from_edges("V", {"v"}, std::vector<std::pair<int, int>>{});
    auto w = homext_to_hom(v, Mapping{0}, k3);
    CHECK(w.graph.order() == 4);
    CHECK(w.graph.degree(0) == 2);
    CHECK(homomorphic(w.graph, k3));

    Graph vx = Graph::from_edges("VX", {"v", "x"}, std::vector<std::pair<int, int>>{{0, 1}});
    auto bad = homext_to_hom(vx, Mapping{0, 0}, k3);
    CHECK_FALSE(homomorphic(bad.graph, k3));

    CHECK_THROWS_AS(homext_to_hom(v, Mapping{0}, named::cycle(6)), PreconditionError);
    CHECK_THROWS_AS(homext_to_hom(v, Mapping{0}, named::wheel(6)), PreconditionError);

    // name collisions get a suffix
    Graph clash = Graph::from_edges("C", {"hat_1"}, std::vector<std::pair<int, int>>{});
    auto renamed = homext_to_hom(clash, Mapping{0}, k3);
    CHECK(renamed.graph.find_vertex("hat_1_"));
}

TEST_CASE("wrapped expressions") {
    auto k3 = named::complete(3);
    std::mt19937_64 rng(17);
    for (int round = 0; round < 40; ++round) {
        auto e = random_linear_expression(2 + round % 6, 2 + round % 2, 0.4, rng());
        Graph g = evaluate(e).graph;
        Mapping pre(static_cast<std::size_t>(g.order()), -1);
        for (auto& x : pre)
            if (rng() % 3 == 0) x = static_cast<int>(rng() % 3);
        auto w = homext_to_hom(g, pre, k3, &e);
        REQUIRE(w.expr);
        auto naive = oracle::naive_evaluate(*w.expr);
        auto want = oracle::naive_of(w.graph);
        CHECK(naive.vertices == want.vertices);
        CHECK(naive.edges == want.edges);
        if (w.expr_strategy != "split-labels") CHECK(w.expr->width() == e.width() + 3);
        else CHECK(w.expr->width() <= e.width() * 4 + 3);
        CHECK(homomorphic(w.graph, k3) == oracle::hom_exists(g, k3, pre));
    }
    Graph other = named::complete(2);
    auto e = clique_expression(3);
    CHECK_THROWS_AS(homext_to_hom(other, Mapping{}, k3, &e), PreconditionError);
}

TEST_CASE("wrapping strategies follow the expression shape") {
    auto k3 = named::complete(3);
    // P3 a-b-c built linearly: a and b end on label 3 with different prescriptions
    Graph p3 = Graph::from_edges("P3", {"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    auto linear = parse_kexpr("r(2->3){e(1,2){(r(1->3){e(1,2){(v(1,a)+v(2,b))}}+v(1,c))}}");
    REQUIRE(same_vertices_and_edges(evaluate(linear).graph, p3));
    auto spine = homext_to_hom(p3, Mapping{0, -1, 1}, k3, &linear);
    CHECK(spine.expr_strategy == "spine");
    CHECK(spine.expr->width() == linear.width() + 3);

    // same classes but a and c come from different subtrees: only splitting works
    auto split_shape = parse_kexpr("e(1,2){(v(1,a)+(v(2,b)+v(1,c)))}");
    REQUIRE(same_vertices_and_edges(evaluate(split_shape).graph, p3));
    auto split = homext_to_hom(p3, Mapping{0, -1, 1}, k3, &split_shape);
    CHECK(split.expr_strategy == "split-labels");
    CHECK(homomorphic(split.graph, k3));

    auto root = homext_to_hom(p3, Mapping{0, -1, 0}, k3, &split_shape);
    CHECK(root.expr_strategy == "root-join");
    CHECK(root.expr->width() == split_shape.width() + 3);
}

TEST_CASE("reduction of a one-variable instance") {
    auto csp = parse_csp("csp 1 6\nconstraint x1\nallow 1\n");
    auto r = reduce_csp(csp, k3_factors());
    CHECK(r.meta.blocks == 4);
    CHECK(r.meta.full_blocks == 4);
    CHECK_FALSE(r.meta.forward_only);
    CHECK(r.meta.lambda.size() == 6);
    CHECK(same_vertices_and_edges(evaluate(r.expr).graph, r.graph));
    CHECK(r.expr.width() <= r.meta.main_labels + r.meta.done_labels + r.meta.constraint_work_labels +
                                r.meta.incidence_work_labels);
    auto h = build_forward_witness(r, {1});
    CHECK(is_homomorphism(r.graph, r.target, h));
    CHECK_THROWS_AS(build_forward_witness(r, {2}), PreconditionError);
    CHECK_THROWS_AS(build_forward_witness(r, {1, 1}), PreconditionError);
}

TEST_CASE("U-sets see exactly the earlier V-sets of their variable") {
    auto csp = parse_csp("csp 2 6\nconstraint x1 x2\nallow 1 4\nallow 2 4\n");
    ReductionOptions opt;
    opt.blocks_override = 3;
    auto r = reduce_csp(csp, k3_factors(), opt);
    CHECK(r.meta.forward_only);
    std::vector<int> role(static_cast<std::size_t>(r.graph.order()), 0); // 1 = V, 2 = U
    for (const auto& inc : r.incidences) {
        for (int v : inc.v_set) role[static_cast<std::size_t>(v)] = 1;
        for (int u : inc.u_set) role[static_cast<std::size_t>(u)] = 2;
    }
    for (const auto& inc_u : r.incidences) {
        for (int u : inc_u.u_set) {
            std::set<int> expected;
            for (const auto& inc_v : r.incidences)
                if (inc_v.var == inc_u.var && inc_v.block < inc_u.block) expected.insert(inc_v.v_set.begin(), inc_v.v_set.end());
            std::set<int> seen;
            for (int x : r.graph.neighbors(u))
                if (role[static_cast<std::size_t>(x)] == 1) seen.insert(x);
            CHECK(seen == expected);
        }
    }
    CHECK(same_vertices_and_edges(evaluate(r.expr).graph, r.graph));
    auto h = build_forward_witness(r, {2, 4});
    CHECK(is_homomorphism(r.graph, r.target, h));
}

TEST_CASE("reduction preconditions and markers") {
    auto csp = parse_csp("csp 1 5\nconstraint x1\nallow 1\n");
    CHECK_THROWS_AS(reduce_csp(csp, k3_factors()), PreconditionError);
    auto rep = parse_csp("csp 2 6\nconstraint x1 x1\nallow 1 1\n");
    CHECK_THROWS_AS(reduce_csp(rep, k3_factors()), PreconditionError);
    CHECK_THROWS_AS(reduce_csp(parse_csp("csp 1 2\nconstraint x1\nallow 1\n"), factorize_prime(named::complete(2))),
                    Error);

    auto empty = parse_csp("csp 1 6\nconstraint x1\n");
    auto r = reduce_csp(empty, k3_factors());
    CHECK(r.meta.empty_constraint);
    CHECK(r.graph.order() == 2);
    CHECK(r.partial == Mapping{0, 0});
    CHECK_FALSE(find_homomorphism(r.graph, r.target, r.partial));
    CHECK_THROWS_AS(build_forward_witness(r, {1}), PreconditionError);

    ReductionOptions wrap;
    wrap.to_hom = true;
    auto wr = reduce_csp(empty, k3_factors(), wrap);
    CHECK_FALSE(homomorphic(wr.graph, wr.target));
    CHECK(same_vertices_and_edges(evaluate(wr.expr).graph, wr.graph));
}

TEST_CASE("wrapped reduction stays a yes-instance with its witness") {
    auto csp = parse_csp("csp 1 6\nconstraint x1\nallow 2\nallow 5\n");
    ReductionOptions opt;
    opt.to_hom = true;
    opt.blocks_override = 2;
    auto r = reduce_csp(csp, k3_factors(), opt);
    CHECK(r.hat_vertex.size() == 3);
    CHECK(same_vertices_and_edges(evaluate(r.expr).graph, r.graph));
    auto h = build_forward_witness(r, {5});
    CHECK(is_homomorphism(r.graph, r.target, h));
}
