#include "oracles.hpp"

#include <dgk/chain.hpp>

#include <doctest.h>

using namespace dgk;

namespace {

std::vector<Chain> all_chains_upto(i64 dmax)
{
    std::vector<Chain> out;
    for (i64 d = 2; d <= dmax; ++d) {
        auto cs = oriented_chains(d);
        out.insert(out.end(), cs.begin(), cs.end());
    }
    return out;
}

void every_chain(size_t len, int wmax, const std::function<void(const Chain&)>& f)
{
    Chain c(len, 1);
    while (true) {
        f(c);
        size_t i = 0;
        while (i < len && c[i] == wmax) c[i++] = 1;
        if (i == len) return;
        ++c[i];
    }
}

} // namespace

TEST_CASE("chain text round trip")
{
    for (const Chain& c : all_chains_upto(30)) {
        CHECK(parse_chain(print_chain(c)) == c);
        CHECK(reversed(reversed(c)) == c);
    }
    CHECK(print_chain(parse_chain(" [ 2, 2 ,2, 3 ] ")) == "[(3),3]");
    CHECK(print_chain(parse_chain("[(1),5]")) == "[2,5]");
    CHECK(parse_chain("[]").empty());
    CHECK_THROWS_AS(parse_chain("[3,"), ParseError);
    CHECK_THROWS_AS(parse_chain("[0]"), ParseError);
    CHECK_THROWS_AS(parse_chain("3,2"), ParseError);
    CHECK_THROWS_AS(parse_chain("[3] x"), ParseError);
}

TEST_CASE("discriminant agrees with determinants")
{
    CHECK(disc({}) == 1);
    CHECK(disc({3, 2}) == 5);
    for (size_t len = 1; len <= 5; ++len)
        every_chain(len, 6, [](const Chain& c) {
            Tree t = tree_of(c);
            Int o = oracle::tree_det(t);
            REQUIRE(disc(c) == o);
            REQUIRE(determinant(negated(intersection_matrix(t))) == o);
        });
    for (size_t len = 6; len <= 12; ++len)
        for (int w = 1; w <= 6; ++w) {
            Chain c(len, 2);
            c[len / 2] = w;
            c[0] = 7 - w;
            CHECK(disc(c) == oracle::laplace_det(negated(intersection_matrix(tree_of(c)))));
        }
}

TEST_CASE("e, e~ and delta")
{
    for (const Chain& c : all_chains_upto(50)) {
        ChainInvariants inv = invariants(c);
        CHECK(inv.e == e_recurrence(c));
        CHECK(inv.e_tilde == e_recurrence(reversed(c)));
        CHECK(inv.delta == Rat(1, inv.d));
        CHECK(chain_from_e(inv.e) == c);
        CHECK(is_negative_definite(c));
    }
    CHECK_THROWS_AS(invariants({1, 1}), DomainError);
    CHECK_THROWS_AS(chain_from_e(Rat(1)), DomainError);
}

TEST_CASE("oriented chains cover every chain of a given discriminant")
{
    for (i64 d = 2; d <= 14; ++d) {
        auto brute = oracle::chains_with_disc(d);
        std::sort(brute.begin(), brute.end());
        CHECK(oriented_chains(d) == brute);
    }
}

TEST_CASE("small chains")
{
    std::map<i64, std::vector<std::string>> extra = {
        {5, {"[3,2]"}}, {7, {"[4,2]", "[3,(2)]"}}, {8, {"[3,3]", "[2,3,2]"}}, {9, {"[5,2]", "[3,(3)]"}},
        {10, {"[4,(2)]"}}, {11, {"[6,2]", "[4,3]", "[3,(4)]", "[2,3,(2)]"}}};
    for (i64 d = 3; d <= 11; ++d) {
        std::set<Chain> want{{static_cast<int>(d)}, Chain(d - 1, 2)};
        for (const auto& s : extra[d]) want.insert(canonical_form(parse_chain(s)));
        auto got = enumerate_admissible_chains(d);
        CHECK(std::set<Chain>(got.begin(), got.end()) == want);
    }
    CHECK(enumerate_admissible_chains(7).size() == 4);
    CHECK(enumerate_admissible_chains(11).size() == 6);
    CHECK(enumerate_admissible_chains(2) == std::vector<Chain>{{2}});
}

TEST_CASE("adjoint chains")
{
    CHECK(adjoint_chain({3, 3}) == Chain{2, 3, 2});
    CHECK(adjoint_chain({2, 4}) == Chain{3, 2, 2});
    for (int k = 2; k <= 10; ++k) {
        Chain c(k - 1, 2);
        c.push_back(3);
        CHECK(adjoint_chain(c) == Chain{k + 1, 2});
    }
    for (const Chain& c : all_chains_upto(50)) {
        Chain a = adjoint_chain(c);
        CHECK(adjoint_chain(a) == c);
        CHECK(e_of(a) + e_of(c) == 1);
        CHECK(disc(a) == disc(c));
    }
}

TEST_CASE("d = 2d' - d'' exactly when the first weight is 2")
{
    for (const Chain& c : all_chains_upto(40)) {
        bool holds = disc(c) == 2 * d_prime(c) - d_second(c);
        CHECK(holds == (c.front() == 2));
    }
}

TEST_CASE("bounds for e of [(k),c,...]")
{
    for (int k = 0; k <= 6; ++k)
        for (int c = 3; c <= 6; ++c)
            for (size_t r = 0; r <= 4; ++r)
                every_chain(r, 5, [&](const Chain& rest) {
                    if (!is_admissible(rest)) return;
                    Chain t(k, 2);
                    t.push_back(c);
                    t.insert(t.end(), rest.begin(), rest.end());
                    auto [lo, hi] = e_bounds(k, c);
                    Rat e = e_of(t);
                    REQUIRE(lo <= e);
                    REQUIRE(e < hi);
                });
}

TEST_CASE("e + alpha/d = 1")
{
    for (const Chain& c : all_chains_upto(60))
        for (int alpha = 1; alpha <= 3; ++alpha)
            CHECK(classify_e_plus_alpha(alpha, c) == (e_of(c) + Rat(alpha, disc(c)) == 1));
    CHECK_THROWS_AS(classify_e_plus_alpha(4, {2}), DomainError);
}
