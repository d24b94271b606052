#include <dgk/checks.hpp>

#include <doctest.h>

using namespace dgk;

namespace {

TwoFiberInput<i64> input_of(const TwoFiberSolution& s)
{
    return {s.n, s.gamma, s.alpha, s.kappa, s.kappa_t, s.c, s.p, s.cp, s.pp, s.ct, s.pt, s.rho, s.rho_t};
}

RulingScenario scenario_of(const TwoFiberSolution& s)
{
    RulingScenario r;
    r.n = s.n;
    r.gamma = s.gamma;
    r.d = s.c * s.kappa;
    FiberNumerics a, b;
    a.c_h = s.F.back().first;
    a.kappa = s.kappa;
    a.rho = s.rho;
    b.c_h = s.Ft.back().first;
    b.kappa = s.kappa_t;
    b.rho = s.rho_t;
    r.fibers = {{s.F, a}, {s.Ft, b}};
    return r;
}

std::vector<TwoFiberSolution> t1_two_solutions()
{
    SearchConfig cfg = default_config("fiber-pairs");
    std::vector<TwoFiberSolution> out;
    for (const auto& fc : fiber_pair_candidates({{2}, {2, 2}}, cfg.twig_list, cfg.e_options, 3, 12)) out.push_back(fc.sol);
    return out;
}

} // namespace

TEST_CASE("two-fiber relations on the published tuples")
{
    // (n, gamma, kappa, kappa~), (c,p), (c',p'), (c~,p~), with rho = kappa^2 for E = [4]
    CHECK(two_fiber_relations<i64>({1, 4, 0, 4, 2, 4, 1, 1, 1, 8, 5, 16, 4}) == std::pair<i64, i64>{0, 0});
    CHECK(two_fiber_relations<i64>({1, 4, 0, 4, 2, 4, 3, 1, 1, 8, 1, 16, 4}) == std::pair<i64, i64>{0, 0});
    CHECK(two_fiber_relations<i64>({2, 4, 1, 4, 2, 2, 1, 1, 1, 4, 3, 16, 4}) == std::pair<i64, i64>{0, 0});
    CHECK(two_fiber_relations<i64>({1, 4, 0, 4, 2, 4, 1, 1, 1, 8, 5, 16, 4}).first == 0);
    CHECK_THROWS_AS(two_fiber_relations<i64>({1, 4, 0, 4, 3, 4, 1, 1, 1, 8, 5, 16, 4}), DomainError);
}

TEST_CASE("alpha = 0 and a trivial second pair reduce eq. 5")
{
    for (i64 n = 1; n <= 3; ++n)
        for (i64 k = 2; k <= 5; ++k) {
            TwoFiberInput<i64> x{n, 4, 0, k, k, 3, 2, 1, 1, 3, 0, 0, 0};
            i64 d = 3 * k;
            CHECK(two_fiber_relations(x).first == d * n + 4 - 2 - k * (2 + 1));
        }
}

TEST_CASE("solver finds the three published solutions")
{
    auto sols = t1_two_solutions();
    std::set<std::tuple<i64, i64, i64, i64, i64, i64, i64, i64, i64, i64>> got;
    for (const auto& s : sols) {
        got.insert({s.n, s.gamma, s.kappa, s.kappa_t, s.c, s.p, s.cp, s.pp, s.ct, s.pt});
        CHECK(two_fiber_relations(input_of(s)) == std::pair<i64, i64>{0, 0});
        CHECK(s.c * s.kappa == s.ct * s.kappa_t);
        CHECK((s.gamma - 2) % gcd64(s.kappa, s.kappa_t) == 0);
        RulingResiduals r = scenario_of(s).fibers.size() == 2 ? check_ruling_equations(scenario_of(s)) : RulingResiduals{};
        CHECK(r.r1 == 0);
        CHECK(r.r2 == 0);
    }
    CHECK(got.count({1, 4, 4, 2, 4, 1, 1, 1, 8, 5}));
    CHECK(got.count({1, 4, 4, 2, 4, 3, 1, 1, 8, 1}));
    CHECK(got.count({2, 4, 4, 2, 2, 1, 1, 1, 4, 3}));
}

TEST_CASE("third twig reconstruction")
{
    std::map<std::pair<i64, i64>, std::string> want = {{{4, 1}, "[3,3,(4)]"}, {{4, 3}, "[(8),4]"}, {{2, 1}, "[4,(6)]"}};
    SearchOutput out = search_fiber_pairs(default_config("fiber-pairs"));
    REQUIRE(out.hits.size() == 3);
    for (const Hit& h : out.hits) {
        CHECK(print_chain(h.twigs[2]) == want.at({h.fibers->c, h.fibers->p}));
        auto t3 = reconstruct_T3(h.fibers->F, h.fibers->Ft, h.fibers->n);
        REQUIRE(t3);
        for (const FiberParts* P : {&t3->A, &t3->B})
            if (!P->Zl.empty()) CHECK(e_of(adjoint_chain(P->Zl)) == 1 - e_of(P->Zl));
    }
}

TEST_CASE("ruling equations")
{
    SearchOutput out = search_fiber_pairs(default_config("fiber-pairs"));
    const TwoFiberSolution& s = *out.hits.front().fibers;
    REQUIRE(s.c == 4);
    REQUIRE(s.p == 1);
    RulingScenario sc = scenario_of(s);
    sc.H1 = 2;
    RulingResiduals r = check_ruling_equations(sc);
    CHECK(r.r1 == 0);
    CHECK(r.r2 == 0);
    CHECK(r.r3 == 0);
    CHECK(r.r4 == 8);  // lcm(4, 8) = 8 while d = 16
    sc.d /= 2;
    RulingResiduals h = check_ruling_equations(sc);
    CHECK(h.r1 != 0);
    CHECK(h.r2 != 0);

    // a lone fiber would need kappa = 1
    RulingScenario one;
    one.n = 1;
    one.gamma = 4;
    one.d = 4;
    FiberNumerics f;
    f.c_h = 1;
    f.kappa = 1;
    f.rho = 1;
    one.fibers = {{{{4, 1}}, f}};
    CHECK_FALSE(check_ruling_equations(one).consistent());
}

TEST_CASE("integer roots")
{
    CHECK(*integer_roots(1, -3, 2) == std::vector<Int>{1, 2});
    CHECK(integer_roots(1, 0, 1)->empty());
    CHECK(*integer_roots(0, 2, -4) == std::vector<Int>{2});
    CHECK_FALSE(integer_roots(0, 0, 0).has_value());
    CHECK(integer_roots(3, -7, -46)->empty());
}

TEST_CASE("eliminations")
{
    QuadraticElimination q = elimination_t1_23();
    CHECK(q.coeffs == std::array<Int, 3>{3, -7, -46});
    CHECK(q.integer_roots.empty());
    CHECK(q.eq5[1] == -7 * q.eq5[0]);
    CHECK(q.eq5[2] == q.eq5[0]);

    auto kw = elimination_kw2(40);
    std::vector<std::tuple<i64, i64, i64, i64, bool>> got;
    for (const auto& s : kw) got.push_back({s.k, s.kappa_t, s.c, s.p, s.coprime});
    CHECK(got == std::vector<std::tuple<i64, i64, i64, i64, bool>>{{1, 2, 6, 2, false}, {5, 4, 9, 4, true}});
    for (const auto& s : kw) CHECK(s.kappa_t * s.kappa_t == 3 * s.k + 1);
}
