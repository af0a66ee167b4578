#include "homcw/error.hpp"
#include "homcw/hom_oracle.hpp"
#include "homcw/signatures.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

using namespace homcw;

TEST_CASE("signature numbers of small targets") {
    CHECK(signature_number(named::complete(3)) == 6);
    CHECK(signature_number(named::complete(4)) == 14);
    CHECK(signature_number(named::complete(5)) == 30);
    CHECK(signature_number(named::cycle(5)) == 10);
    CHECK(signature_number(named::wheel(6)) >= 7);
    CHECK(signature_number(named::wheel(6)) == oracle::subset_family(named::wheel(6)).size());
}

TEST_CASE("K3 family is the singletons and pairs") {
    auto fam = SignatureFamily::build(named::complete(3));
    std::vector<VertexSet> want{0b001, 0b010, 0b011, 0b100, 0b101, 0b110};
    CHECK(fam.sets() == want);
    for (std::size_t i = 0; i < fam.size(); ++i) CHECK(fam.index_of(fam.set(i)) == i);
    CHECK_FALSE(fam.index_of(0b111).has_value());
    CHECK(format_set(fam.target(), 0b011) == "{1,2}");
}

TEST_CASE("signature of a set and maximal witness") {
    auto k3 = named::complete(3);
    CHECK(signature_of(k3, 0b001) == 0b110);
    CHECK(signature_of(k3, 0b011) == 0b100);
    CHECK(signature_of(k3, 0b111) == 0);
    CHECK_THROWS_AS(signature_of(k3, 0), PreconditionError);
    CHECK(maximal_witness(k3, 0b100) == 0b011);
}

TEST_CASE("closure agrees with subset enumeration and double signature is identity") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        Graph h = oracle::random_graph(2 + round % 9, 0.5, rng, "H");
        auto fam = SignatureFamily::build(h);
        auto ref = oracle::subset_family(h);
        CHECK(std::set<VertexSet>(fam.sets().begin(), fam.sets().end()) == ref);
        CHECK(brute_force_family(h) == std::vector<VertexSet>(ref.begin(), ref.end()));
        for (std::size_t i = 0; i < fam.size(); ++i) {
            VertexSet a = fam.set(i);
            CHECK(signature_of(h, signature_of(h, a)) == a);
            CHECK(fam.witness(i) == maximal_witness(h, a));
            CHECK(signature_of(h, fam.witness(i)) == a);
            for (std::uint32_t j : fam.subsets_of(i)) CHECK(is_subset(fam.set(j), a));
        }
    }
}

TEST_CASE("subsets and neighborhoods index lists") {
    auto fam = SignatureFamily::build(named::complete(3));
    auto in_n0 = fam.contained_in_neighborhood(0);
    for (auto s : in_n0) CHECK(is_subset(fam.set(s), fam.target().neighbor_mask(0)));
    CHECK(in_n0.size() == 3);
}

TEST_CASE("targets above the word limit are refused") {
    CHECK_THROWS_AS(SignatureFamily::build(named::cycle(65)), CapExceeded);
}

TEST_CASE("set helpers") {
    CHECK(set_size(0b1011) == 3);
    CHECK(set_members(0b1010) == std::vector<int>{1, 3});
    CHECK(is_subset(0b010, 0b110));
    CHECK_FALSE(is_subset(0b011, 0b110));
}
