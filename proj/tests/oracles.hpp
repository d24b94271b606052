#pragma once

#include <dgk/pairs.hpp>

#include <functional>
#include <map>

// Slow, independent reference computations for the tests.
namespace oracle {

using dgk::Chain;
using dgk::i64;
using dgk::Int;
using dgk::IntMatrix;
using dgk::Rat;
using dgk::Tree;

/// Cofactor expansion along the first row.
inline Int laplace_det(const IntMatrix& m)
{
    size_t n = m.size();
    if (n == 0) return 1;
    if (n == 1) return m[0][0];
    Int total = 0;
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j] == 0) continue;
        IntMatrix minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<Int> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        Int c = m[0][j] * laplace_det(minor);
        total += (j % 2 == 0) ? c : Int(-c);
    }
    return total;
}

/// det(-M) for a weighted tree by expanding along a leaf: d(T) = w d(T - v) - d(T - v - u).
class TreeDet {
public:
    explicit TreeDet(const Tree& t) : w_(t.w), adj_(t.adjacency()) {}

    Int operator()() { return det(std::vector<bool>(w_.size(), true)); }

private:
    std::vector<int> w_;
    std::vector<std::vector<int>> adj_;
    std::map<std::vector<bool>, Int> memo_;

    Int det(const std::vector<bool>& alive)
    {
        auto it = memo_.find(alive);
        if (it != memo_.end()) return it->second;
        int leaf = -1, nb = -1;
        for (size_t v = 0; v < w_.size() && leaf < 0; ++v) {
            if (!alive[v]) continue;
            int deg = 0, last = -1;
            for (int u : adj_[v])
                if (alive[u]) {
                    ++deg;
                    last = u;
                }
            if (deg <= 1) {
                leaf = static_cast<int>(v);
                nb = last;
            }
        }
        Int r;
        if (leaf < 0) {
            r = 1;
        } else {
            std::vector<bool> a = alive;
            a[leaf] = false;
            r = Int(w_[leaf]) * det(a);
            if (nb >= 0) {
                a[nb] = false;
                r -= det(a);
            }
        }
        memo_[alive] = r;
        return r;
    }
};

inline Int tree_det(const Tree& t) { return TreeDet(t)(); }

/// Solves M x = b by Cramer's rule with Laplace determinants; small systems only.
inline std::vector<Rat> cramer(const IntMatrix& m, const std::vector<Int>& b)
{
    Int d = laplace_det(m);
    std::vector<Rat> x;
    for (size_t j = 0; j < m.size(); ++j) {
        IntMatrix mj = m;
        for (size_t i = 0; i < m.size(); ++i) mj[i][j] = b[i];
        x.push_back(Rat(laplace_det(mj)) / Rat(d));
    }
    return x;
}

/// Bark equations Bk.D_i = beta_i - 2 checked by substitution.
inline bool satisfies_bark_equations(const Tree& t, const std::vector<Rat>& x)
{
    auto adj = t.adjacency();
    for (int i = 0; i < t.size(); ++i) {
        Rat lhs = Rat(-t.w[i]) * x[i];
        for (int j : adj[i]) lhs += x[j];
        if (lhs != Rat(static_cast<int>(adj[i].size()) - 2)) return false;
    }
    return true;
}

inline std::vector<Int> bark_rhs(const Tree& t)
{
    std::vector<Int> r;
    for (const auto& a : t.adjacency()) r.push_back(static_cast<int>(a.size()) - 2);
    return r;
}

inline Int continuant(const Chain& c)
{
    Int a = 1, b = 0;  // d of the empty tail and of "minus one" tail
    for (size_t i = c.size(); i-- > 0;) {
        Int n = Int(c[i]) * a - b;
        b = a;
        a = n;
    }
    return a;
}

/// Every chain with weights >= 2 and continuant d, by depth-first search.
inline std::vector<Chain> chains_with_disc(i64 d)
{
    std::vector<Chain> out;
    Chain cur;
    std::function<void()> go = [&] {
        if (!cur.empty()) {
            Int x = continuant(cur);
            if (x == d) out.push_back(cur);
            if (x > d) return;
        }
        if (static_cast<i64>(cur.size()) >= d) return;
        for (int w = 2; w <= d; ++w) {
            cur.push_back(w);
            go();
            cur.pop_back();
        }
    };
    go();
    return out;
}

/// Multiplicity sequence from the Euclidean quotients.
inline std::vector<i64> euclid_multiplicities(i64 c, i64 p)
{
    std::vector<i64> mu;
    while (p > 0) {
        i64 q = c / p, r = c % p;
        for (i64 k = 0; k < q; ++k) mu.push_back(p);
        c = p;
        p = r;
    }
    return mu;
}

/// A fiber is numerically trivial against each of its components.
inline bool fiber_is_numerically_trivial(const dgk::Fiber& F)
{
    for (int i = 0; i < F.size(); ++i) {
        Int s = -Int(F.w[i]) * F.m[i];
        for (int j : F.adj[i]) s += F.m[j];
        if (s != 0) return false;
    }
    return true;
}

} // namespace oracle
