#pragma once

#include "io.hpp"

#include <functional>

namespace dgk {

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

namespace detail {

inline CheckResult run_check(const std::string& name, const std::function<std::string()>& body)
{
    try {
        std::string why = body();
        return {name, why.empty(), why};
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

/// All pair sequences with c1 <= cmax and at most hmax pairs.
inline void pair_sequences(i64 cmax, size_t hmax, const std::function<void(const CharPairSeq&)>& f)
{
    std::function<void(CharPairSeq&)> grow = [&](CharPairSeq& s) {
        i64 c = s.empty() ? 0 : gcd64(s.back().first, s.back().second);
        if (!s.empty() && c == 1) {
            f(s);
            return;
        }
        if (s.size() == hmax) return;
        if (s.empty()) {
            for (i64 c1 = 2; c1 <= cmax; ++c1)
                for (i64 p1 = 1; p1 < c1; ++p1) {
                    s.push_back({c1, p1});
                    grow(s);
                    s.pop_back();
                }
            return;
        }
        for (i64 p = 1; p <= c; ++p) {
            s.push_back({c, p});
            grow(s);
            s.pop_back();
        }
    };
    CharPairSeq s;
    grow(s);
}

} // namespace detail

/// Internal consistency checks that run in well under a minute.
inline std::vector<CheckResult> property_checks()
{
    std::vector<CheckResult> out;
    auto add = [&](const std::string& n, const std::function<std::string()>& b) { out.push_back(detail::run_check(n, b)); };

    add("chains/e-bijection", [] {
        for (i64 d = 2; d <= 40; ++d) {
            size_t phi = 0;
            for (i64 q = 1; q < d; ++q) phi += gcd64(q, d) == 1;
            auto cs = oriented_chains(d);
            if (cs.size() != phi) return "oriented chain count wrong at d=" + std::to_string(d);
            for (const Chain& c : cs)
                if (disc(c) != d || !is_admissible(c)) return "bad chain " + print_chain(c);
        }
        return std::string();
    });
    add("chains/determinant", [] {
        for (i64 d = 2; d <= 30; ++d)
            for (const Chain& c : oriented_chains(d))
                if (determinant(negated(intersection_matrix(tree_of(c)))) != disc(c)) return "mismatch at " + print_chain(c);
        return std::string();
    });
    add("chains/adjoint-involution", [] {
        for (i64 d = 2; d <= 50; ++d)
            for (const Chain& c : oriented_chains(d))
                if (adjoint_chain(adjoint_chain(c)) != c) return "not an involution at " + print_chain(c);
        return std::string();
    });
    add("barks/chains", [] {
        for (i64 d = 2; d <= 30; ++d)
            for (const Chain& c : oriented_chains(d)) {
                bark_chain(c);
                bark_one_sided(c);
            }
        return std::string();
    });
    add("barks/catalog", [] {
        for (const auto& E : enumerate_exceptional_shapes({}))
            if (E.is_fork) {
                fork_invariants(E.fork);
                bark_fork(E.fork);
            } else {
                bark_chain(E.chain);
            }
        return std::string();
    });
    add("pairs/mu-sums", [] {
        for (i64 c = 1; c <= 60; ++c)
            for (i64 p = 1; p <= c; ++p)
                if (mu_sums(c, p) != mu_sums_simulated(c, p))
                    return "mismatch at (" + std::to_string(c) + "," + std::to_string(p) + ")";
        return std::string();
    });
    add("pairs/round-trip", [] {
        std::string bad;
        detail::pair_sequences(20, 3, [&](const CharPairSeq& s) {
            if (!bad.empty()) return;
            Fiber F = reconstruct_fiber(s);
            if (pairs_from_fiber(F) != s || pairs_from_fiber(parse_fiber(format_fiber(F))) != s) bad = print_pairs(s);
        });
        return bad.empty() ? bad : "round trip fails for " + bad;
    });
    add("ruling/fiber-pairs-residuals", [] {
        for (const auto& fc : fiber_pair_candidates({{2}}, default_config("fiber-pairs").twig_list, default_config("fiber-pairs").e_options, 3, 12)) {
            const auto& s = fc.sol;
            TwoFiberInput<i64> in{s.n, s.gamma, s.alpha, s.kappa, s.kappa_t, s.c, s.p, s.cp, s.pp, s.ct, s.pt, s.rho, s.rho_t};
            auto [r5, r6] = two_fiber_relations(in);
            if (r5 != 0 || r6 != 0) return std::string("nonzero residual");
            if (!fc.t3.A.Zl.empty() && adjoint_chain(fc.t3.A.Zl) != cat({{fc.t3.A.G}, fc.t3.A.Zu})) return std::string("adjoint mismatch");
        }
        return std::string();
    });
    return out;
}

} // namespace dgk
