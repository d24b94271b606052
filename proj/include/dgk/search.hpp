#pragma once

#include "ruling.hpp"

#include <functional>
#include <mutex>
#include <thread>

namespace dgk {

struct TwigStats {
    Chain chain;
    Int d;
    Rat e, e_tilde, delta;
    int length = 0;
    int K = 0;  ///< sum of (w - 2)
};

inline TwigStats twig_stats(const Chain& c)
{
    ChainInvariants inv = invariants(c);
    TwigStats s;
    s.chain = c;
    s.d = inv.d;
    s.e = inv.e;
    s.e_tilde = inv.e_tilde;
    s.delta = inv.delta;
    s.length = static_cast<int>(c.size());
    for (int w : c) s.K += w - 2;
    return s;
}

/// Sums over the three twigs of the boundary fork D.
struct DStats {
    Rat delta, e, e_tilde;
    Int d;
    int count = 0;  ///< number of components
    int K = 0;      ///< K.D as a sum of (w - 2), branch included
};

inline DStats d_stats(int b, const std::array<const TwigStats*, 3>& t)
{
    DStats s;
    s.delta = s.e = s.e_tilde = 0;
    Int prod = 1;
    s.count = 1;
    s.K = b - 2;
    for (const TwigStats* x : t) {
        s.delta += x->delta;
        s.e += x->e;
        s.e_tilde += x->e_tilde;
        prod *= x->d;
        s.count += x->length;
        s.K += x->K;
    }
    Rat dr = Rat(prod) * (Rat(b) - s.e_tilde);
    s.d = num(dr);
    if (den(dr) != 1) throw std::logic_error("fork discriminant not integral");
    return s;
}

inline DStats d_stats(int b, const std::array<Chain, 3>& twigs)
{
    TwigStats a = twig_stats(twigs[0]), c = twig_stats(twigs[1]), e = twig_stats(twigs[2]);
    return d_stats(b, {&a, &c, &e});
}

/// Every predicate the searches know about, in report order.
inline const std::vector<std::string>& predicate_names()
{
    static const std::vector<std::string> n = {"noether", "zar", "square", "bmy", "eps2", "ke", "w2", "wdelta", "kle0", "delta3"};
    return n;
}

struct SearchConfig {
    std::string name;
    std::set<std::string> predicates;
    std::string eps2_scope = "below2";       ///< "below2" or "all"
    std::string group_order_mode = "seifert";  ///< "seifert" or "h1"
    std::vector<int> b_values{1, 2};
    bool four_eps2 = false;
    int catalog_length = 0;  ///< 0: derive from the twig ranges
    bool use_index = true;

    struct TwigSpec {
        std::vector<Chain> chains;
        std::pair<i64, i64> d{0, 0};
        std::vector<Chain> families;  ///< contain a single (k) run, replaced by k twos
        std::pair<int, int> k{0, 0};
        i64 d_max = 0;
    };
    struct Case {
        std::string name;
        std::array<TwigSpec, 3> twigs;
        std::vector<int> ordered;  ///< consecutive indices sorted by (d, weights)
    };
    std::vector<Case> cases;

    // fiber-pairs only
    std::vector<EOption> e_options;
    std::vector<Chain> twig_list;
    int alpha_max = 3, cp_max = 12;
};

struct PredicateResult {
    std::string name;
    bool pass = false;
    std::string witness;
};

using PredicateReport = std::vector<PredicateResult>;

inline bool passes(const PredicateReport& r, const std::set<std::string>& wanted)
{
    for (const auto& x : r)
        if (wanted.count(x.name) && !x.pass) return false;
    return true;
}

inline Rat group_order_for(const ExceptionalShape& s, const SearchConfig& cfg)
{
    return Rat(cfg.group_order_mode == "h1" ? s.d : s.group_order);
}

struct PredicateInput {
    int b;
    const DStats& D;
    const ExceptionalShape& E;
    int eps;
};

inline PredicateResult eval_predicate(const std::string& name, const PredicateInput& in, const SearchConfig& cfg, bool full)
{
    const DStats& D = in.D;
    const ExceptionalShape& E = in.E;
    Rat G = group_order_for(E, cfg);
    int eps = in.eps, b = in.b;
    PredicateResult r{name, false, ""};
    auto w = [&](std::string s) { if (full) r.witness = std::move(s); };
    if (name == "noether") {
        int lhs = E.length + D.count, rhs = 7 + eps + D.K + E.KE;
        r.pass = lhs == rhs;
        w("#E+#D=" + std::to_string(lhs) + " 7+eps+KD+KE=" + std::to_string(rhs));
    } else if (name == "zar") {
        bool ok = (b == 1 || b == 2) && Rat(b) < D.e_tilde && D.delta < 1;
        if (!ok) {
            w("b=" + std::to_string(b) + " e~=" + str(D.e_tilde) + " delta=" + str(D.delta));
        } else {
            Rat rhs = -(1 - D.delta) * (1 - D.delta) / (D.e_tilde - b) + D.e - 1 - eps;
            r.pass = E.bk2 == rhs;
            w("Bk2=" + str(E.bk2) + " rhs=" + str(rhs));
        }
    } else if (name == "square") {
        Rat q = frac(-D.d, E.d);
        r.pass = is_positive_square(q);
        w("-d(D)/d(E)=" + str(q));
    } else if (name == "bmy") {
        Rat hi = 1 + eps + E.bk2 + 3 / G;
        r.pass = D.delta <= D.e && D.e <= hi;
        w("delta=" + str(D.delta) + " e=" + str(D.e) + " bound=" + str(hi));
    } else if (name == "eps2") {
        if (eps >= 2 && cfg.eps2_scope != "all") {
            r.pass = true;
            w("n/a");
        } else {
            Rat ii = D.delta - (1 - 6 / G);
            Rat iii = eps + E.bk2 + 9 / G;
            r.pass = ii >= 0 && iii >= 0;
            std::string s = "ii=" + str(ii) + " iii=" + str(iii);
            if (E.delta_empty()) {
                Rat iv = D.e + D.delta - (Rat(1, 2) + eps + Rat(E.KE, 4));
                r.pass = r.pass && iv >= 0;
                s += " iv=" + str(iv);
            }
            w(s);
        }
    } else if (name == "ke") {
        bool exc = !E.is_fork && E.chain == Chain{4} && eps == 2;
        r.pass = exc || E.KE + 2 * eps <= 5;
        w("KE+2eps=" + std::to_string(E.KE + 2 * eps));
    } else if (name == "w2") {
        Rat a = D.e_tilde + D.delta - (b + 1), c = D.delta + 1 / G - 1;
        r.pass = a < 0 && c > 0;
        w("e~+delta-b-1=" + str(a) + " delta+1/|G|-1=" + str(c));
    } else if (name == "wdelta") {
        Rat c = D.delta + 1 / G - 1;
        r.pass = c > 0;
        w("delta+1/|G|-1=" + str(c));
    } else if (name == "kle0") {
        Rat a = D.e_tilde + D.delta - (b + 1);
        r.pass = a >= 0;
        w("e~+delta-b-1=" + str(a));
    } else if (name == "delta3") {
        r.pass = E.delta.size() != 3 || (b == 2 && eps == 2);
        w("components=" + std::to_string(E.delta.size()));
    } else {
        throw DomainError("unknown predicate " + name);
    }
    return r;
}

inline PredicateReport evaluate_predicates(int b, const DStats& D, const ExceptionalShape& E, int eps, const SearchConfig& cfg)
{
    PredicateReport out;
    PredicateInput in{b, D, E, eps};
    for (const auto& n : predicate_names()) out.push_back(eval_predicate(n, in, cfg, true));
    return out;
}

inline bool accepts(int b, const DStats& D, const ExceptionalShape& E, int eps, const SearchConfig& cfg)
{
    PredicateInput in{b, D, E, eps};
    for (const auto& n : predicate_names())
        if (cfg.predicates.count(n) && !eval_predicate(n, in, cfg, false).pass) return false;
    return true;
}

struct LambdaP2 {
    Rat lambda, P2;
};

inline LambdaP2 lambda_and_P2(int b, const DStats& D)
{
    if (D.delta >= 1) throw DomainError("delta must be < 1");
    if (D.e_tilde == b) throw DomainError("e~ equals b");
    Rat x = D.e_tilde - b;
    return {1 - x / (1 - D.delta), (1 - D.delta) * (1 - D.delta) / x};
}

struct Hit {
    std::string case_name;
    int b = 0;
    std::array<Chain, 3> twigs;
    ExceptionalShape E;
    int eps = 0;
    DStats D;
    PredicateReport report;
    std::optional<TwoFiberSolution> fibers;  ///< fiber-pairs only
    bool gcd_check = true;                   ///< fiber-pairs only

    auto key() const
    {
        std::vector<std::pair<Int, Chain>> tw;
        for (const Chain& t : twigs) tw.push_back({disc(t), t});
        return std::tuple(case_name, b, tw, E.is_fork, E.text(), eps);
    }
};

namespace detail {

inline Chain expand_family(const Chain& fam, int k)
{
    Chain out;
    for (int w : fam) {
        if (w == 0) out.insert(out.end(), k, 2);
        else out.push_back(w);
    }
    return out;
}

inline std::vector<Chain> twig_options(const SearchConfig::TwigSpec& s)
{
    std::vector<Chain> out = s.chains;
    for (i64 d = s.d.first; d <= s.d.second && d >= 2; ++d) {
        auto o = oriented_chains(d);
        out.insert(out.end(), o.begin(), o.end());
    }
    for (const Chain& f : s.families)
        for (int k = s.k.first; k <= s.k.second; ++k) {
            Chain c = expand_family(f, k);
            if (s.d_max == 0 || disc(c) <= s.d_max) out.push_back(c);
        }
    return out;
}

inline bool twig_less_eq(const TwigStats& a, const TwigStats& b)
{
    if (a.d != b.d) return a.d < b.d;
    return a.chain <= b.chain;
}

} // namespace detail

/// Family chains mark the variable run with a 0 weight, written "(k)" in JSON.
inline Chain parse_family(std::string s)
{
    auto at = s.find("(k)");
    if (at == std::string::npos) return parse_chain(s);
    s.replace(at, 3, "0");
    Chain c;
    std::string body = s.substr(s.find('[') + 1);
    body = body.substr(0, body.rfind(']'));
    size_t i = 0;
    while (i < body.size()) {
        size_t j = body.find(',', i);
        if (j == std::string::npos) j = body.size();
        std::string tok = body.substr(i, j - i);
        if (tok == "0") c.push_back(0);
        else {
            Chain part = parse_chain("[" + tok + "]");
            c.insert(c.end(), part.begin(), part.end());
        }
        i = j + 1;
    }
    return c;
}

struct SearchOutput {
    std::vector<Hit> hits;
    size_t triples = 0;
    size_t catalog_size = 0;
    int catalog_length = 0;
};

/// Twig triples against the catalog; the (noether, zar) index narrows the shapes when both are required.
inline SearchOutput run_boundary_search(const SearchConfig& cfg, int jobs = 1)
{
    std::map<Chain, TwigStats> stats;
    struct Triple {
        std::string case_name;
        std::array<const TwigStats*, 3> t;
    };
    std::vector<std::array<std::vector<Chain>, 3>> options;
    for (const auto& cs : cfg.cases) {
        std::array<std::vector<Chain>, 3> o;
        for (int i = 0; i < 3; ++i) {
            o[i] = detail::twig_options(cs.twigs[i]);
            for (const Chain& c : o[i])
                if (!stats.count(c)) stats.emplace(c, twig_stats(c));
        }
        options.push_back(o);
    }
    std::vector<Triple> triples;
    std::set<std::pair<std::string, std::array<Chain, 3>>> seen;
    for (size_t ci = 0; ci < cfg.cases.size(); ++ci) {
        const auto& cs = cfg.cases[ci];
        const auto& o = options[ci];
        for (const Chain& a : o[0])
            for (const Chain& b : o[1])
                for (const Chain& c : o[2]) {
                    std::array<const TwigStats*, 3> t{&stats.at(a), &stats.at(b), &stats.at(c)};
                    bool ok = true;
                    for (size_t k = 0; k + 1 < cs.ordered.size() && ok; ++k)
                        ok = detail::twig_less_eq(*t[cs.ordered[k]], *t[cs.ordered[k + 1]]);
                    if (ok && seen.insert({cs.name, {a, b, c}}).second) triples.push_back({cs.name, t});
                }
    }

    int L = cfg.catalog_length;
    if (L <= 0) {
        L = 1;
        for (const Triple& tr : triples)
            for (int b : cfg.b_values) {
                int count = 1, K = b - 2;
                for (auto* x : tr.t) {
                    count += x->length;
                    K += x->K;
                }
                L = std::max(L, 7 + 2 + K + 3 - count);
            }
        L = std::min(L, 60);
    }
    ShapeBounds sb;
    sb.max_param = L;
    sb.max_length = L;
    sb.four_eps2 = cfg.four_eps2;
    std::vector<ExceptionalShape> catalog = enumerate_exceptional_shapes(sb);

    bool use_index = cfg.use_index && cfg.predicates.count("noether") && cfg.predicates.count("zar");
    std::map<std::pair<int, Rat>, std::vector<std::pair<int, int>>> index;
    for (int i = 0; i < static_cast<int>(catalog.size()); ++i)
        for (int eps : catalog[i].eps)
            index[{catalog[i].length - catalog[i].KE - eps, catalog[i].bk2 + eps}].push_back({i, eps});

    SearchOutput out;
    out.triples = triples.size();
    out.catalog_size = catalog.size();
    out.catalog_length = L;
    std::mutex mu;
    auto work = [&](size_t lo, size_t step) {
        std::vector<Hit> local;
        for (size_t ti = lo; ti < triples.size(); ti += step) {
            const Triple& tr = triples[ti];
            for (int b : cfg.b_values) {
                DStats D = d_stats(b, tr.t);
                auto consider = [&](int i, int eps) {
                    const ExceptionalShape& E = catalog[i];
                    if (!accepts(b, D, E, eps, cfg)) return;
                    Hit h;
                    h.case_name = tr.case_name;
                    h.b = b;
                    for (int k = 0; k < 3; ++k) h.twigs[k] = tr.t[k]->chain;
                    h.E = E;
                    h.eps = eps;
                    h.D = D;
                    h.report = evaluate_predicates(b, D, E, eps, cfg);
                    local.push_back(std::move(h));
                };
                if (use_index) {
                    if (!(Rat(b) < D.e_tilde && D.delta < 1)) continue;
                    Rat target = -(1 - D.delta) * (1 - D.delta) / (D.e_tilde - b) + D.e - 1;
                    auto it = index.find({7 + D.K - D.count, target});
                    if (it == index.end()) continue;
                    for (auto [i, eps] : it->second) consider(i, eps);
                } else {
                    for (int i = 0; i < static_cast<int>(catalog.size()); ++i)
                        for (int eps : catalog[i].eps) consider(i, eps);
                }
            }
        }
        std::lock_guard lock(mu);
        for (auto& h : local) out.hits.push_back(std::move(h));
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
        for (auto& t : pool) t.join();
    }
    std::sort(out.hits.begin(), out.hits.end(), [](const Hit& a, const Hit& b) { return a.key() < b.key(); });
    return out;
}

/// Distinct exceptional divisors among the hits.
inline std::vector<std::string> hit_shapes(const std::vector<Hit>& hits)
{
    std::set<std::string> s;
    for (const Hit& h : hits) s.insert(h.E.text());
    return {s.begin(), s.end()};
}

struct FiberPairCandidate {
    TwoFiberSolution sol;
    T3Result t3;
};

/// Every first fiber F whose twigs are (T1, T2) from the given lists, completed by solve_two_fiber.
inline std::vector<FiberPairCandidate> fiber_pair_candidates(const std::vector<Chain>& T1s, const std::vector<Chain>& T2s,
                                                              const std::vector<EOption>& options, int alpha_max, int cp_max,
                                                              size_t* shapes_tried = nullptr)
{
    std::vector<FiberPairCandidate> out;
    std::set<Chain> allowed(T1s.begin(), T1s.end());
    std::set<std::tuple<i64, i64, i64, i64, i64>> shapes;
    for (i64 alpha = 0; alpha <= alpha_max; ++alpha)
        for (i64 cp = 1; cp <= cp_max; ++cp)
            for (i64 pp = 1; pp <= cp; ++pp) {
                if (gcd64(cp, pp) != 1) continue;
                for (const Chain& T2 : T2s) {
                    i64 dT = static_cast<i64>(disc(T2)), dpT = static_cast<i64>(d_prime(T2));
                    FShape s{cp * dT, cp * (dT - dpT), cp, pp, alpha};
                    if (s.c <= s.p) continue;
                    auto parts = analyze_fiber(f_sequence(s, 1));
                    if (!parts || !allowed.count(parts->T1) || parts->Zl != T2) continue;
                    if (!shapes.insert({s.c, s.p, s.cp, s.pp, s.alpha}).second) continue;
                    for (const TwoFiberSolution& sol : solve_two_fiber(s, options)) {
                        auto t3 = reconstruct_T3(sol.F, sol.Ft, sol.n);
                        if (!t3 || t3->b < 1) continue;
                        FiberPairCandidate fc{sol, *t3};
                        fc.sol.b = t3->b;
                        fc.sol.twigs = {t3->A.T1, t3->A.Zl, t3->T3};
                        out.push_back(std::move(fc));
                    }
                }
            }
    if (shapes_tried) *shapes_tried = shapes.size();
    return out;
}

inline Hit fiber_pair_hit(const FiberPairCandidate& fc, const SearchConfig& cfg)
{
    Hit h;
    h.case_name = "fiber-pairs";
    h.b = fc.sol.b;
    h.twigs = fc.sol.twigs;
    h.E = make_shape(fc.sol.E.shape, {fc.sol.E.eps}, "fiber");
    h.eps = fc.sol.E.eps;
    h.D = d_stats(h.b, h.twigs);
    h.report = evaluate_predicates(h.b, h.D, h.E, h.eps, cfg);
    h.fibers = fc.sol;
    i64 g = gcd64(fc.sol.c, fc.sol.ct);
    h.gcd_check = frac(-h.D.d, h.E.d) == Rat(g * g);
    return h;
}

/// Two singular fibers of the ruling; the first is enumerated, the second solved for.
inline SearchOutput search_fiber_pairs(const SearchConfig& cfg)
{
    SearchOutput out;
    for (const auto& fc : fiber_pair_candidates(cfg.twig_list, cfg.twig_list, cfg.e_options, cfg.alpha_max, cfg.cp_max, &out.triples)) {
        Hit h = fiber_pair_hit(fc, cfg);
        if (passes(h.report, cfg.predicates)) out.hits.push_back(std::move(h));
    }
    std::sort(out.hits.begin(), out.hits.end(), [](const Hit& a, const Hit& b) {
        return std::tuple(a.fibers->alpha, a.fibers->c, a.fibers->p, a.key()) < std::tuple(b.fibers->alpha, b.fibers->c, b.fibers->p, b.key());
    });
    return out;
}

} // namespace dgk
