#include "homcw/error.hpp"
#include "homcw/hom_oracle.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

using namespace homcw;

TEST_CASE("search agrees with plain backtracking") {
    std::mt19937_64 rng(21);
    const Graph targets[] = {named::complete(3), named::cycle(5), named::wheel(6), named::complete(2)};
    for (int round = 0; round < 150; ++round) {
        Graph g = oracle::random_graph(1 + round % 9, 0.45, rng, "G");
        const Graph& h = targets[round % 4];
        Mapping pre(static_cast<std::size_t>(g.order()), -1);
        if (round % 3 == 0)
            for (auto& x : pre)
                if (rng() % 4 == 0) x = static_cast<int>(rng() % static_cast<std::uint64_t>(h.order()));
        auto found = find_homomorphism(g, h, pre);
        CHECK(found.has_value() == oracle::hom_exists(g, h, pre));
        if (found) {
            CHECK(is_homomorphism(g, h, *found));
            for (std::size_t v = 0; v < pre.size(); ++v)
                if (pre[v] >= 0) CHECK((*found)[v] == pre[v]);
        }
        auto all = enumerate_extensions(g, h, pre, 100000);
        CHECK(all.mappings.size() == oracle::count_homs(g, h, pre));
        CHECK(std::is_sorted(all.mappings.begin(), all.mappings.end()));
    }
}

TEST_CASE("enumeration stops at the cap") {
    auto e = enumerate_extensions(named::edgeless(4), named::complete(3), {}, 10);
    CHECK(e.mappings.size() == 10);
    CHECK(e.truncated);
    auto full = enumerate_extensions(named::edgeless(2), named::complete(3), {}, 10);
    CHECK(full.mappings.size() == 9);
    CHECK_FALSE(full.truncated);
}

TEST_CASE("loops in the input need looped images") {
    Graph g("G", true);
    int v = g.add_vertex("v");
    g.add_edge(v, v);
    CHECK_FALSE(find_homomorphism(g, named::complete(3)));
    CHECK(find_homomorphism(g, named::loop_vertex()));
}

TEST_CASE("partial mapping files") {
    auto m = parse_partial_mapping("# comment\nmap a 1\nmap b 2\n");
    CHECK(m.size() == 2);
    CHECK(parse_partial_mapping(serialize_partial_mapping(m)) == m);
    CHECK_THROWS_AS(parse_partial_mapping("map a 1\nmap a 2\n"), ParseError);
    CHECK_THROWS_AS(parse_partial_mapping("map a\n"), ParseError);
    auto g = Graph::from_edges("G", {"a", "b"}, std::vector<std::pair<int, int>>{{0, 1}});
    auto k3 = named::complete(3);
    auto r = resolve_partial(g, k3, m);
    CHECK(r == Mapping{0, 1});
    CHECK(to_partial_mapping(g, k3, r) == m);
    CHECK_THROWS_AS(resolve_partial(g, k3, {{"zz", "1"}}), Error);
    CHECK_THROWS_AS(resolve_partial(g, k3, {{"a", "9"}}), Error);
}

TEST_CASE("cores") {
    auto w6 = compute_core(named::wheel(6));
    CHECK(w6.core.order() == 3);
    CHECK(are_isomorphic(w6.core, named::complete(3)));
    CHECK(is_homomorphism(named::wheel(6), w6.core, w6.retraction));
    for (std::size_t i = 0; i < w6.core_vertices.size(); ++i)
        CHECK(w6.retraction[static_cast<std::size_t>(w6.core_vertices[i])] == static_cast<int>(i));
    CHECK(is_core(named::complete(4)));
    CHECK(is_core(named::cycle(5)));
    CHECK_FALSE(is_core(named::cycle(6)));
    CHECK(compute_core(named::cycle(6)).core.order() == 2);
    CHECK(compute_core(named::edgeless(3)).core.order() == 1);
    auto prod = direct_product(named::complete(3), named::cycle(5));
    CHECK(compute_core(prod).core.order() <= prod.order());
    CHECK_THROWS_AS(compute_core(named::cycle(25)), CapExceeded);
}

TEST_CASE("trivial targets and incomparability") {
    CHECK(is_trivial(named::cycle(6)));
    CHECK(is_trivial(named::loop_vertex()));
    CHECK_FALSE(is_trivial(named::complete(3)));
    CHECK_FALSE(incomparable(named::complete(3), named::complete(4)));
    CHECK_FALSE(incomparable(named::cycle(5), named::complete(3)));
    CHECK_FALSE(incomparable(named::complete(4), named::cycle(5)));
    std::mt19937_64 rng(4);
    for (int round = 0; round < 30; ++round) {
        Graph a = oracle::random_graph(5, 0.5, rng, "A"), b = oracle::random_graph(5, 0.5, rng, "B");
        CHECK(incomparable(a, b) == (!oracle::hom_exists(a, b) && !oracle::hom_exists(b, a)));
    }
}

TEST_CASE("maps into a product are maps into every factor") {
    std::mt19937_64 rng(8);
    const Graph k3 = named::complete(3), c5 = named::cycle(5), k4 = named::complete(4);
    for (int round = 0; round < 40; ++round) {
        Graph g = oracle::random_graph(2 + round % 6, 0.5, rng, "G");
        const Graph& x = round % 2 ? k3 : k4;
        bool each = homomorphic(g, x) && homomorphic(g, c5);
        CHECK(homomorphic(g, direct_product(x, c5)) == each);
    }
}

TEST_CASE("cores are idempotent and equivalent to the input") {
    std::mt19937_64 rng(10);
    for (int round = 0; round < 25; ++round) {
        Graph h = oracle::random_graph(3 + round % 6, 0.5, rng, "H");
        auto r = compute_core(h);
        CHECK(homomorphic(h, r.core));
        CHECK(homomorphic(r.core, h));
        CHECK(is_homomorphism(h, r.core, r.retraction));
        CHECK(compute_core(r.core).core.order() == r.core.order());
    }
}

TEST_CASE("prime factorization of products") {
    auto k3 = named::complete(3), c5 = named::cycle(5);
    auto prime = factorize_prime(k3);
    CHECK(prime.is_prime());
    CHECK(prime.factors.size() == 2);
    CHECK(verify_factorization(prime));

    auto f = factorize_prime(direct_product(k3, c5));
    CHECK_FALSE(f.is_prime());
    REQUIRE(f.factors.size() == 2);
    CHECK(verify_factorization(f));
    bool ok = (are_isomorphic(f.factors[0], k3) && are_isomorphic(f.factors[1], c5)) ||
              (are_isomorphic(f.factors[0], c5) && are_isomorphic(f.factors[1], k3));
    CHECK(ok);

    auto three = factorize_prime(direct_product(std::vector<Graph>{k3, k3, k3}));
    CHECK(three.factors.size() == 3);
    CHECK(verify_factorization(three));
}

TEST_CASE("split target addresses H1 x W") {
    auto f = factorize_prime(direct_product(named::complete(3), named::complete(4)));
    SplitTarget st(f);
    CHECK(st.h1.order() * st.w.order() == 12);
    for (int v = 0; v < st.target.order(); ++v) CHECK(st.vertex(st.h1_of(v), st.w_of(v)) == v);
}

TEST_CASE("projectivity of K3 and C5") {
    auto k3 = check_projective(factorize_prime(named::complete(3)), 0, 2);
    CHECK(k3.projective);
    CHECK(k3.extension_count == 2);
    CHECK(k3.projection_count == 2);
    auto k3_3 = check_projective(factorize_prime(named::complete(3)), 0, 3);
    CHECK(k3_3.extension_count == 3);
    auto c5 = check_projective(factorize_prime(named::cycle(5)), 0, 2);
    CHECK(c5.projective);
    CHECK(c5.extension_count == c5.projection_count);
    CHECK_THROWS_AS(check_projective(factorize_prime(named::complete(3)), 0, 1), PreconditionError);
}
