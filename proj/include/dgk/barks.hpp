#pragma once

#include "chain.hpp"

#include <optional>
#include <set>

namespace dgk {

using RatMatrix = std::vector<std::vector<Rat>>;

/// Gaussian elimination over Q; throws on a singular system.
inline std::vector<Rat> solve_linear(RatMatrix a, std::vector<Rat> rhs)
{
    int n = static_cast<int>(a.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) throw DomainError("singular linear system");
        std::swap(a[k], a[piv]);
        std::swap(rhs[k], rhs[piv]);
        for (int i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            Rat f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<Rat> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Rat s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

inline RatMatrix to_rat(const IntMatrix& m)
{
    RatMatrix r(m.size(), std::vector<Rat>(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) r[i][j] = Rat(m[i][j]);
    return r;
}

struct BarkCoefficients {
    std::vector<Rat> coefficients;
    Rat bk_square;
};

/// Solves Bk.D_i = beta(D_i) - 2 on the whole tree.
inline BarkCoefficients bark_tree(const Tree& t)
{
    auto adj = t.adjacency();
    std::vector<Rat> rhs(t.size());
    for (int i = 0; i < t.size(); ++i) rhs[i] = Rat(static_cast<int>(adj[i].size()) - 2);
    BarkCoefficients r;
    r.coefficients = solve_linear(to_rat(intersection_matrix(t)), rhs);
    r.bk_square = 0;
    for (int i = 0; i < t.size(); ++i) r.bk_square += r.coefficients[i] * rhs[i];
    return r;
}

inline void require_admissible(const Chain& c)
{
    if (c.empty() || !is_admissible(c)) throw DomainError("not a nonempty admissible chain: " + print_chain(c));
}

inline BarkCoefficients bark_one_sided(const Chain& c)
{
    require_admissible(c);
    int n = static_cast<int>(c.size());
    std::vector<Rat> rhs(n, 0);
    rhs[0] = -1;
    BarkCoefficients r;
    r.coefficients = solve_linear(to_rat(intersection_matrix(tree_of(c))), rhs);
    r.bk_square = -r.coefficients[0];
    Int d = disc(c);
    for (int i = 0; i < n; ++i)
        if (r.coefficients[i] != frac(disc(c.begin() + i + 1, c.end()), d))
            throw std::logic_error("one-sided bark closed form mismatch");
    if (r.bk_square != -e_of(c)) throw std::logic_error("one-sided bark square mismatch");
    return r;
}

inline Rat bk2_chain_closed(const Chain& c)
{
    return -frac(d_prime(c) + d_prime(reversed(c)) + 2, disc(c));
}

inline std::vector<Rat> bark_chain_closed(const Chain& c)
{
    Int d = disc(c);
    std::vector<Rat> out;
    for (size_t i = 0; i < c.size(); ++i)
        out.push_back(frac(disc(c.begin() + i + 1, c.end()) + disc(c.begin(), c.begin() + i), d));
    return out;
}

inline BarkCoefficients bark_chain(const Chain& c)
{
    require_admissible(c);
    BarkCoefficients r = bark_tree(tree_of(c));
    if (r.coefficients != bark_chain_closed(c)) throw std::logic_error("chain bark closed form mismatch");
    if (r.bk_square != bk2_chain_closed(c)) throw std::logic_error("chain bark square mismatch");
    return r;
}

struct ForkInvariants {
    Int d;
    Rat delta, e, e_tilde;
};

inline ForkInvariants fork_sums(const Fork& f)
{
    ForkInvariants r;
    r.delta = r.e = r.e_tilde = 0;
    Int prod = 1;
    for (const Chain& t : f.twigs) {
        Int d = disc(t);
        prod *= d;
        r.delta += frac(1, d);
        r.e += frac(d_prime(t), d);
        r.e_tilde += frac(d_prime(reversed(t)), d);
    }
    Rat dr = Rat(prod) * (Rat(f.b) - r.e_tilde);
    if (den(dr) != 1) throw std::logic_error("fork discriminant not integral");
    r.d = num(dr);
    return r;
}

inline bool is_platonic(std::array<Int, 3> d)
{
    std::sort(d.begin(), d.end());
    if (d[0] == 2 && d[1] == 2) return true;
    return d[0] == 2 && d[1] == 3 && d[2] >= 3 && d[2] <= 5;
}

inline bool is_admissible(const Fork& f)
{
    for (const Chain& t : f.twigs)
        if (t.empty() || !is_admissible(t)) return false;
    if (f.b < 1 || !is_negative_definite(tree_of(f))) return false;
    return is_platonic({disc(f.twigs[0]), disc(f.twigs[1]), disc(f.twigs[2])});
}

inline ForkInvariants fork_invariants(const Fork& f)
{
    ForkInvariants r;
    Int det = determinant(negated(intersection_matrix(tree_of(f))));
    bool twigs_ok = true;
    for (const Chain& t : f.twigs) twigs_ok = twigs_ok && !t.empty() && is_admissible(t);
    if (!twigs_ok) {
        r.d = det;
        return r;
    }
    r = fork_sums(f);
    if (r.d != det) throw std::logic_error("fork discriminant closed form disagrees with determinant");
    return r;
}

inline Rat bk2_fork_closed(const Fork& f)
{
    ForkInvariants s = fork_sums(f);
    return -(s.delta - 1) * (s.delta - 1) / (Rat(f.b) - s.e_tilde) - s.e;
}

inline BarkCoefficients bark_fork(const Fork& f)
{
    if (!is_admissible(f)) throw DomainError("fork is not admissible");
    BarkCoefficients r = bark_tree(tree_of(f));
    if (r.bk_square != bk2_fork_closed(f)) throw std::logic_error("fork bark square mismatch");
    return r;
}

/// Twigs ordered by (discriminant, weights).
inline Fork canonical_fork(Fork f)
{
    std::sort(f.twigs.begin(), f.twigs.end(), [](const Chain& a, const Chain& b) {
        Int da = disc(a), db = disc(b);
        if (da != db) return da < db;
        return a < b;
    });
    return f;
}

/// Order of the local group: d for chains, 4(b - e~)/(delta - 1)^2 for forks.
inline Int group_order(const Chain& c)
{
    require_admissible(c);
    return disc(c);
}

inline Int group_order(const Fork& f)
{
    if (!is_admissible(f)) throw DomainError("fork is not admissible");
    ForkInvariants s = fork_sums(f);
    Rat g = 4 * (Rat(f.b) - s.e_tilde) / ((s.delta - 1) * (s.delta - 1));
    if (den(g) != 1) throw std::logic_error("group order not integral");
    return num(g);
}

struct EDelta {
    Tree E;
    std::vector<Chain> delta;  ///< one chain per connected component
    int E_dot_delta = 0;
};

/// Strips (-2)-tips until none are left.
inline EDelta decompose_E_delta(const Tree& t)
{
    int n = t.size();
    auto adj = t.adjacency();
    std::vector<bool> alive(n, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            if (!alive[v] || t.w[v] != 2) continue;
            int deg = 0;
            for (int u : adj[v]) deg += alive[u];
            if (deg <= 1) {
                alive[v] = false;
                changed = true;
            }
        }
    }
    EDelta r;
    std::vector<int> index(n, -1);
    for (int v = 0; v < n; ++v)
        if (alive[v]) {
            index[v] = r.E.size();
            r.E.w.push_back(t.w[v]);
        }
    for (auto [a, b] : t.edges) {
        if (alive[a] && alive[b]) r.E.edges.push_back({index[a], index[b]});
        if (alive[a] != alive[b]) ++r.E_dot_delta;
    }
    std::vector<bool> seen(n, false);
    for (int v = 0; v < n; ++v) {
        if (alive[v] || seen[v]) continue;
        std::vector<int> comp{v};
        seen[v] = true;
        for (size_t k = 0; k < comp.size(); ++k)
            for (int u : adj[comp[k]])
                if (!alive[u] && !seen[u]) {
                    seen[u] = true;
                    comp.push_back(u);
                }
        auto ddeg = [&](int x) {
            int k = 0;
            for (int u : adj[x]) k += !alive[u];
            return k;
        };
        int start = comp[0];
        for (int x : comp)
            if (ddeg(x) <= 1) { start = x; break; }
        Chain c;
        int prev = -1, cur = start;
        while (cur >= 0) {
            c.push_back(t.w[cur]);
            int next = -1;
            for (int u : adj[cur])
                if (u != prev && !alive[u]) next = u;
            prev = cur;
            cur = next;
        }
        r.delta.push_back(c);
    }
    return r;
}

struct ExceptionalShape {
    std::string family;
    bool is_fork = false;
    Chain chain;
    Fork fork;
    std::vector<int> eps;

    Tree E;
    std::vector<Chain> delta;
    int length = 0;
    int KE = 0;
    int gamma = 0;
    Int d = 0;
    Int group_order = 0;
    Rat bk2 = 0;

    Tree tree() const { return is_fork ? tree_of(fork) : tree_of(chain); }
    bool delta_empty() const { return delta.empty(); }
    std::string text() const
    {
        if (!is_fork) return print_chain(chain);
        return "{b:" + std::to_string(fork.b) + ",twigs:[" + print_chain(fork.twigs[0]) + "," +
               print_chain(fork.twigs[1]) + "," + print_chain(fork.twigs[2]) + "]}";
    }
};

inline void fill_shape(ExceptionalShape& s)
{
    Tree t = s.tree();
    EDelta ed = decompose_E_delta(t);
    if (ed.E.size() == 0) throw DomainError("exceptional divisor consists of (-2)-curves only");
    s.E = ed.E;
    s.delta = ed.delta;
    s.length = t.size();
    s.KE = 0;
    for (int w : ed.E.w) s.KE += w - 2;
    s.gamma = ed.E.size() == 1 ? ed.E.w[0] : 0;
    if (s.is_fork) {
        s.d = fork_sums(s.fork).d;
        s.group_order = group_order(s.fork);
        s.bk2 = bk2_fork_closed(s.fork);
    } else {
        s.d = disc(s.chain);
        s.group_order = s.d;
        s.bk2 = bk2_chain_closed(s.chain);
    }
}

inline ExceptionalShape make_shape(const Chain& c, std::vector<int> eps, std::string family = "")
{
    ExceptionalShape s;
    s.family = std::move(family);
    s.chain = c;
    s.eps = std::move(eps);
    fill_shape(s);
    return s;
}

inline ExceptionalShape make_shape(const Fork& f, std::vector<int> eps, std::string family = "")
{
    ExceptionalShape s;
    s.family = std::move(family);
    s.is_fork = true;
    s.fork = canonical_fork(f);
    s.eps = std::move(eps);
    fill_shape(s);
    return s;
}

struct ShapeBounds {
    int max_param = 8;
    int max_length = 60;
    bool four_eps2 = false;
};

inline Chain twos(int n) { return Chain(n, 2); }

inline Chain cat(std::initializer_list<Chain> parts)
{
    Chain out;
    for (const Chain& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

/// The catalog of possible exceptional divisors, each tagged with its admissible epsilons.
inline std::vector<ExceptionalShape> enumerate_exceptional_shapes(const ShapeBounds& bd)
{
    int P = bd.max_param, L = bd.max_length;
    std::vector<std::pair<Chain, std::pair<std::vector<int>, std::string>>> chains;
    auto add = [&](const Chain& c, std::vector<int> eps, const char* fam) {
        if (static_cast<int>(c.size()) <= L) chains.push_back({c, {std::move(eps), fam}});
    };
    add({5}, {0, 1}, "a");
    add({6}, {0}, "a");
    add({7}, {0}, "a");
    add({4}, bd.four_eps2 ? std::vector<int>{1, 2} : std::vector<int>{1}, "c1");
    for (int r = 1; r <= P; ++r) {
        add(cat({twos(r), {4}}), {1}, "c1");
        add(cat({twos(r), {5}}), {1}, "c1");
    }
    for (int r = 0; r <= P; ++r)
        for (int x = r; x <= P; ++x) add(cat({twos(r), {3}, twos(x)}), {2}, "b3");
    for (int x = 0; x <= P; ++x)
        for (int y = 0; y <= P; ++y) {
            if (x + y + 2 > L) continue;
            add(cat({twos(x), {3}, twos(y), {3}}), {1}, "c2");
            add(cat({twos(x), {3}, twos(y), {4}}), {1}, "c2");
            add(cat({twos(x), {4}, twos(y), {3}}), {1}, "c2");
        }
    for (int r = 0; r <= P; ++r)
        for (int x = 0; x <= P; ++x)
            for (int y = 0; y <= P; ++y)
                if (r + x + y + 3 <= L) add(cat({twos(r), {3}, twos(x), {3}, twos(y), {3}}), {1}, "c3");
    for (Chain c : {Chain{2, 4, 2}, Chain{2, 5, 2}, Chain{2, 3, 3, 2}, Chain{2, 3, 4, 2}, Chain{2, 4, 2, 2}, Chain{2, 5, 2, 2}})
        add(c, {1}, "c4");

    std::vector<ExceptionalShape> out;
    std::map<Chain, size_t> where;
    for (auto& [c, tag] : chains) {
        Chain key = canonical_form(c);
        auto it = where.find(key);
        if (it != where.end()) {
            auto& e = out[it->second].eps;
            for (int x : tag.first)
                if (std::find(e.begin(), e.end(), x) == e.end()) e.push_back(x);
            std::sort(e.begin(), e.end());
            continue;
        }
        where[key] = out.size();
        out.push_back(make_shape(key, tag.first, tag.second));
    }

    std::vector<std::pair<Chain, Chain>> b1 = {{{3}, {2, 2}}, {{3}, {2, 2, 2}}, {{3}, {2, 2, 2, 2}}, {{2, 3}, {2, 2}}};
    for (int n = 0; n <= P; ++n) b1.push_back({cat({twos(n), {3}}), {2}});
    std::set<Fork> forks;
    for (auto& [a, b] : b1) {
        Fork f{2, {a, reversed(b), {2}}};
        if (1 + static_cast<int>(a.size() + b.size()) + 1 <= L && forks.insert(canonical_fork(f)).second)
            out.push_back(make_shape(f, {2}, "b1"));
    }
    std::vector<std::pair<Chain, Chain>> b2 = {{{2, 2}, {2, 2}}, {{2, 2}, {2, 2, 2}}, {{2, 2}, {2, 2, 2, 2}}};
    for (int n = 1; n <= P; ++n) b2.push_back({{2}, twos(n)});
    for (auto& [a, b] : b2) {
        Fork f{3, {a, reversed(b), {2}}};
        if (1 + static_cast<int>(a.size() + b.size()) + 1 <= L && forks.insert(canonical_fork(f)).second)
            out.push_back(make_shape(f, {2}, "b2"));
    }
    return out;
}

} // namespace dgk
