#pragma once

#include "barks.hpp"
#include "pairs.hpp"

namespace dgk {

/// Pieces of a fiber read off relative to U and the last curve Z1 of the first pair.
struct FiberParts {
    int G = 0;        ///< weight of U
    Chain Zu;         ///< strictly between U and Z1, from U
    Chain Zl;         ///< rest of the first pair, tip-first toward Z1
    int Z1 = 0;
    Chain T1;         ///< curves of pairs 2..h-1, tip-first toward Z1
    Chain Dp;         ///< curves of the last pair other than C
    i64 C_mult = 0;
};

namespace detail {

inline std::optional<Chain> chain_toward(const Fiber& F, const std::vector<int>& nodes, int attach)
{
    if (nodes.empty()) return Chain{};
    std::vector<bool> in(F.size(), false);
    for (int v : nodes) in[v] = true;
    std::vector<int> ends;
    for (int v : nodes)
        if (std::find(F.adj[v].begin(), F.adj[v].end(), attach) != F.adj[v].end()) ends.push_back(v);
    if (ends.size() != 1) return std::nullopt;
    std::vector<int> seq{ends[0]};
    std::vector<bool> seen(F.size(), false);
    seen[ends[0]] = true;
    while (true) {
        std::vector<int> nx;
        for (int v : F.adj[seq.back()])
            if (in[v] && !seen[v]) nx.push_back(v);
        if (nx.size() > 1) return std::nullopt;
        if (nx.empty()) break;
        seq.push_back(nx[0]);
        seen[nx[0]] = true;
    }
    if (seq.size() != nodes.size()) return std::nullopt;
    Chain out;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) out.push_back(F.w[*it]);
    return out;
}

} // namespace detail

inline std::optional<FiberParts> analyze_fiber(const CharPairSeq& seq)
{
    Fiber F = reconstruct_fiber(seq);
    if (F.ends.empty()) return std::nullopt;
    int h = static_cast<int>(seq.size());
    int Z1 = F.ends[0];
    FiberParts r;
    r.G = F.w[0];
    r.Z1 = F.w[Z1];
    r.C_mult = F.m[F.C];
    std::vector<int> pu = tree_path(F.adj, 0, Z1);
    std::vector<bool> on_u(F.size(), false);
    for (size_t i = 1; i + 1 < pu.size(); ++i) {
        r.Zu.push_back(F.w[pu[i]]);
        on_u[pu[i]] = true;
    }
    std::vector<int> zl, t1;
    for (int v = 0; v < F.size(); ++v) {
        if (F.pair[v] == 1 && v != Z1 && !on_u[v]) zl.push_back(v);
        if (F.pair[v] >= 2 && F.pair[v] < h) t1.push_back(v);
        if (F.pair[v] == h && v != F.C && h > 1) r.Dp.push_back(F.w[v]);
    }
    auto Zl = detail::chain_toward(F, zl, Z1);
    auto T1 = detail::chain_toward(F, t1, Z1);
    if (!Zl || !T1) return std::nullopt;
    r.Zl = *Zl;
    r.T1 = *T1;
    return r;
}

/// Residuals (LHS - RHS) of the four ruling equations.
struct ScenarioFiber {
    CharPairSeq seq;
    FiberNumerics num;
};

struct RulingScenario {
    i64 n = 1, gamma = 3, d = 0, H1 = 1;
    std::vector<ScenarioFiber> fibers;
};

struct RulingResiduals {
    Int r1, r2, r3, r4;
    bool consistent() const { return r1 == 0 && r2 == 0 && r3 == 0 && r4 == 0; }
};

inline RulingResiduals check_ruling_equations(const RulingScenario& s)
{
    Int d = s.d, sum1 = 0, sum2 = 0, prod = 1, l = 1;
    for (const auto& f : s.fibers) {
        i64 ch = f.num.c_h;
        Int cbar1 = f.seq[0].first / ch, ps = 0, cps = 0;
        for (size_t i = 0; i + 1 < f.seq.size(); ++i) {
            Int cb = f.seq[i].first / ch, pb = f.seq[i].second / ch;
            ps += pb;
            cps += cb * pb;
        }
        Int k = f.num.kappa;
        sum1 += k * (cbar1 + ps);
        sum2 += k * k * cps + f.num.rho;
        prod *= cbar1;
        l = boost::multiprecision::lcm(l, cbar1);
    }
    RulingResiduals r;
    r.r1 = d * (s.n + 2) + s.gamma - 2 - sum1;
    r.r2 = s.n * d * d + s.gamma - sum2;
    r.r3 = d * s.H1 - prod;
    r.r4 = d - l;
    return r;
}

/// Inputs of the two-fiber specialization: F = (c,p),(c',c')^alpha,(c',p'),... and F~ = (c~,p~),(c~_h,1).
template <class T>
struct TwoFiberInput {
    T n, gamma, alpha, kappa, kappa_t, c, p, cp, pp, ct, pt, rho, rho_t;
};

template <class T>
std::pair<T, T> two_fiber_relations(const TwoFiberInput<T>& x)
{
    T d = x.c * x.kappa;
    if (d != x.ct * x.kappa_t) throw DomainError("need d = c*kappa = c~*kappa~");
    T r5 = d * x.n + x.gamma - 2 - (x.kappa * (x.p + x.alpha * x.cp + x.pp) + x.kappa_t * x.pt);
    T r6 = d * (x.gamma - 2) - x.gamma - (x.kappa * x.kappa * (x.c - x.cp) * (x.alpha * x.cp + x.pp) - x.rho - x.rho_t);
    return {r5, r6};
}

/// Exceptional divisor shapes available to the two-fiber solver.
struct EOption {
    Chain shape;          ///< the whole exceptional divisor
    int gamma = 0, eps = 0, KE = 0;
    bool delta_two = false;  ///< shape = E + [2]
};

struct FShape {
    i64 c = 0, p = 0, cp = 0, pp = 0, alpha = 0;
};

struct TwoFiberSolution {
    i64 n = 0, gamma = 0, kappa = 0, kappa_t = 0;
    i64 c = 0, p = 0, cp = 0, pp = 0, ct = 0, pt = 0, rho = 0, rho_t = 0, alpha = 0;
    int delta_pos = 0;  ///< 0 none, 1 in F, 2 in F~
    EOption E;
    CharPairSeq F, Ft;
    int b = 0;
    std::array<Chain, 3> twigs;

    auto key() const { return std::tuple(c, p, cp, pp, alpha, E.shape, delta_pos, n, kappa, kappa_t, ct, pt); }
};

inline i64 rho_of(i64 kappa, bool delta_two) { return delta_two ? (kappa * kappa + 1) / 2 : kappa * kappa; }

inline CharPairSeq f_sequence(const FShape& s, i64 ch)
{
    CharPairSeq seq{{s.c * ch, s.p * ch}};
    for (i64 i = 0; i < s.alpha; ++i) seq.push_back({s.cp * ch, s.cp * ch});
    seq.push_back({s.cp * ch, s.pp * ch});
    seq.push_back({ch, 1});
    return seq;
}

/// Integer roots of a x^2 + b x + c = 0; nullopt when every integer is a root.
inline std::optional<std::vector<Int>> integer_roots(const Int& a, const Int& b, const Int& c)
{
    std::vector<Int> out;
    if (a == 0) {
        if (b == 0) {
            if (c == 0) return std::nullopt;
            return out;
        }
        if (c % b == 0) out.push_back(-c / b);
        return out;
    }
    Int D = b * b - 4 * a * c;
    if (D < 0 || !is_square(D)) return out;
    Int s = boost::multiprecision::sqrt(D);
    for (Int numr : std::array<Int, 2>{Int(-b - s), Int(-b + s)})
        if (numr % (2 * a) == 0) {
            Int x = numr / (2 * a);
            if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Contracts (-1)-curves of a twig meeting the branch; returns the twig and the new branch weight.
inline std::pair<Chain, int> contract_twig(Chain t, int b)
{
    while (true) {
        auto it = std::find(t.begin(), t.end(), 1);
        if (it == t.end()) break;
        size_t i = it - t.begin();
        if (i > 0) --t[i - 1];
        if (i + 1 < t.size()) --t[i + 1];
        else --b;
        t.erase(t.begin() + i);
    }
    return {t, b};
}

struct T3Result {
    Chain T3;
    int b = 0;
    FiberParts A, B;
};

/// Builds F~ + H + F and contracts down to the third twig.
inline std::optional<T3Result> reconstruct_T3(const CharPairSeq& F, const CharPairSeq& Ft, i64 n)
{
    auto A = analyze_fiber(F);
    auto B = analyze_fiber(Ft);
    if (!A || !B) return std::nullopt;
    for (const FiberParts* P : {&*A, &*B}) {
        if (P->Zl.empty()) continue;
        Chain upper{P->G};
        upper.insert(upper.end(), P->Zu.begin(), P->Zu.end());
        if (adjoint_chain(P->Zl) != upper) throw std::logic_error("upper and lower branches are not adjoint");
    }
    Chain raw = B->Zl;
    raw.push_back(B->Z1);
    raw.insert(raw.end(), B->Zu.rbegin(), B->Zu.rend());
    raw.push_back(B->G);
    raw.push_back(static_cast<int>(n));
    raw.push_back(A->G);
    raw.insert(raw.end(), A->Zu.begin(), A->Zu.end());
    auto [t3, b] = contract_twig(raw, A->Z1);
    if (t3.empty() || !is_admissible(t3)) return std::nullopt;
    return T3Result{t3, b, *A, *B};
}

struct SolverBounds {
    i64 n_max = 3;
    i64 kappa_fallback = 2000;
};

/// All (n, kappa, kappa~, c~, p~) completing a first fiber of the given shape.
inline std::vector<TwoFiberSolution> solve_two_fiber(const FShape& s, const std::vector<EOption>& options, const SolverBounds& bd = {})
{
    std::vector<TwoFiberSolution> out;
    for (const EOption& E : options) {
        std::vector<int> positions = E.delta_two ? std::vector<int>{1, 2} : std::vector<int>{0};
        for (int pos : positions) {
            i64 ch = pos == 1 ? 2 : 1, cth = pos == 2 ? 2 : 1;
            for (i64 n = 1; n <= bd.n_max; ++n) {
                if (n + E.eps + E.KE - 4 != s.alpha) continue;
                i64 g = E.gamma;
                for (i64 kt = 2; kt <= 3 * s.c; ++kt) {
                    if ((s.c * (g - 2)) % kt) continue;
                    if (pos == 2 && kt % 2 == 0) continue;
                    i64 rt = rho_of(kt, pos == 2);
                    // second relation as a quadratic in kappa
                    i64 X = (s.c - s.cp) * (s.alpha * s.cp + s.pp);
                    Int a, b, c0;
                    if (pos == 1) {
                        a = 2 * X - 1;
                        b = -2 * s.c * (g - 2);
                        c0 = 2 * g - 2 * rt - 1;
                    } else {
                        a = X - 1;
                        b = -s.c * (g - 2);
                        c0 = g - rt;
                    }
                    std::vector<i64> kappas;
                    if (auto roots = integer_roots(a, b, c0)) {
                        for (const Int& r : *roots)
                            if (r >= 2) kappas.push_back(static_cast<i64>(r));
                    } else {
                        for (i64 k = 2; k <= bd.kappa_fallback; ++k) kappas.push_back(k);
                    }
                    for (i64 k : kappas) {
                        if (pos == 1 && k % 2 == 0) continue;
                        i64 rr = rho_of(k, pos == 1);
                        i64 d = s.c * k;
                        if (d % kt) continue;
                        i64 ct = d / kt;
                        i64 numr = d * n + g - 2 - k * (s.p + s.alpha * s.cp + s.pp);
                        if (numr % kt) continue;
                        i64 pt = numr / kt;
                        if (pt < 1 || pt >= ct || gcd64(ct, pt) != 1) continue;
                        TwoFiberInput<i64> in{n, g, s.alpha, k, kt, s.c, s.p, s.cp, s.pp, ct, pt, rr, rt};
                        auto [r5, r6] = two_fiber_relations(in);
                        if (r5 != 0 || r6 != 0) continue;
                        TwoFiberSolution sol;
                        sol.n = n;
                        sol.gamma = g;
                        sol.kappa = k;
                        sol.kappa_t = kt;
                        sol.c = s.c;
                        sol.p = s.p;
                        sol.cp = s.cp;
                        sol.pp = s.pp;
                        sol.ct = ct;
                        sol.pt = pt;
                        sol.rho = rr;
                        sol.rho_t = rt;
                        sol.alpha = s.alpha;
                        sol.delta_pos = pos;
                        sol.E = E;
                        sol.F = f_sequence(s, ch);
                        sol.Ft = CharPairSeq{{ct * cth, pt * cth}, {cth, 1}};
                        out.push_back(sol);
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.key() < y.key(); });
    return out;
}

/// T1 = [2,3] branch: the first relation forces 7p' = c'+1, after which the second is a quadratic in c'.
struct QuadraticElimination {
    std::array<Int, 3> coeffs;   ///< normalized a, b, c with a > 0
    Int discriminant;
    std::vector<Int> integer_roots;
    std::array<Int, 3> eq5;      ///< r5 = eq5[0] c' + eq5[1] p' + eq5[2]
};

inline QuadraticElimination elimination_t1_23()
{
    auto input = [](Rat cp, Rat pp) {
        return TwoFiberInput<Rat>{1, 3, 0, 7, 2 * cp, 2 * cp, cp, cp, pp, 7, 3, 49, 4 * cp * cp};
    };
    QuadraticElimination q;
    Rat base = two_fiber_relations(input(0, 0)).first;
    Rat dc = two_fiber_relations(input(1, 0)).first - base;
    Rat dp = two_fiber_relations(input(0, 1)).first - base;
    q.eq5 = {num(dc), num(dp), num(base)};
    auto r6 = [&](Rat cp) { return two_fiber_relations(input(cp, -(Rat(q.eq5[0]) * cp + Rat(q.eq5[2])) / Rat(q.eq5[1]))).second; };
    Rat y0 = r6(0), y1 = r6(1), y2 = r6(2);
    Rat a = (y2 - 2 * y1 + y0) / 2, b = y1 - y0 - a, c = y0;
    if (r6(5) != a * 25 + b * 5 + c) throw std::logic_error("second relation is not quadratic in c'");
    Int l = boost::multiprecision::lcm(boost::multiprecision::lcm(den(a), den(b)), den(c));
    Int A = num(a * Rat(l)), B = num(b * Rat(l)), C = num(c * Rat(l));
    Int g = boost::multiprecision::gcd(boost::multiprecision::gcd(A, B), C);
    if (A < 0) g = -g;
    q.coeffs = {A / g, B / g, C / g};
    q.discriminant = q.coeffs[1] * q.coeffs[1] - 4 * q.coeffs[0] * q.coeffs[2];
    q.integer_roots = *integer_roots(q.coeffs[0], q.coeffs[1], q.coeffs[2]);
    return q;
}

/// Second-branch case with F = (4k+4,2k+2),(2k+2,2),(2,1) and F~ = (c,p),(1,1).
struct KW2Solution {
    i64 k, kappa_t, c, p;
    bool coprime;
};

inline std::vector<KW2Solution> elimination_kw2(i64 kmax)
{
    std::vector<KW2Solution> out;
    for (i64 k = 1; k <= kmax; ++k) {
        CharPairSeq F{{4 * k + 4, 2 * k + 2}, {2 * k + 2, 2}, {2, 1}};
        FiberNumerics nf = fiber_numerics(F, 1, 1);
        i64 d = nf.d_contrib;
        for (i64 kt = 2; kt <= d; ++kt) {
            if (d % kt) continue;
            i64 c = d / kt;
            for (i64 p = 1; p <= c; ++p) {
                CharPairSeq Ft{{c, p}, {1, 1}};
                FiberNumerics nt;
                nt.CE = kt;
                nt.c_h = 1;
                nt.kappa = kt;
                nt.rho = kt * kt;
                nt.d_contrib = d;
                RulingScenario s;
                s.n = 1;
                s.gamma = 3;
                s.d = d;
                s.fibers = {{F, nf}, {Ft, nt}};
                RulingResiduals r = check_ruling_equations(s);
                if (r.r1 == 0 && r.r2 == 0) out.push_back({k, kt, c, p, gcd64(c, p) == 1});
            }
        }
    }
    return out;
}

/// T1 = [(2)] branch: F = (2c',c'),(c',p'),(1,1) and F~ = (5,2),(1,1).
struct T122Solution {
    i64 gamma, kappa, kappa_t, cp, pp;
    int delta_pos;
};

inline std::vector<T122Solution> elimination_t1_22(i64 kappa_max, i64 cp_max)
{
    std::vector<T122Solution> out;
    for (i64 gamma : {3, 4})
        for (int pos : gamma == 3 ? std::vector<int>{0, 1, 2} : std::vector<int>{0})
            for (i64 k = 2; k <= kappa_max; ++k)
                for (i64 cp = 1; cp <= cp_max; ++cp) {
                    i64 d = 2 * cp * k;
                    if (d % 5) continue;
                    i64 kt = d / 5;
                    if (kt < 2) continue;
                    if ((pos == 1 && k % 2 == 0) || (pos == 2 && kt % 2 == 0)) continue;
                    for (i64 pp = 1; pp <= cp; ++pp) {
                        if (gcd64(cp, pp) != 1) continue;
                        TwoFiberInput<i64> in{1, gamma, 0, k, kt, 2 * cp, cp, cp, pp, 5, 2, rho_of(k, pos == 1), rho_of(kt, pos == 2)};
                        auto [r5, r6] = two_fiber_relations(in);
                        if (r5 == 0 && r6 == 0) out.push_back({gamma, k, kt, cp, pp, pos});
                    }
                }
    return out;
}

} // namespace dgk
