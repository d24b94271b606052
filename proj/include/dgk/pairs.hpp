#pragma once

#include "chain.hpp"

#include <optional>

namespace dgk {

using CharPair = std::pair<i64, i64>;
using CharPairSeq = std::vector<CharPair>;

inline bool is_smooth(const CharPairSeq& s) { return s.size() == 1 && s[0] == CharPair{1, 0}; }

inline void validate_pairs(const CharPairSeq& s)
{
    if (s.empty()) throw DomainError("empty pair sequence");
    if (is_smooth(s)) return;
    for (size_t i = 0; i < s.size(); ++i) {
        auto [c, p] = s[i];
        std::string at = " (pair " + std::to_string(i + 1) + ")";
        if (p < 1 || c < p) throw DomainError("need c >= p >= 1" + at);
        if (i + 1 < s.size() && s[i + 1].first != gcd64(c, p))
            throw DomainError("need c_{i+1} = gcd(c_i, p_i)" + at);
    }
    if (gcd64(s.back().first, s.back().second) != 1) throw DomainError("need gcd(c_h, p_h) = 1");
    if (s[0].first == s[0].second) throw DomainError("need c_1 > p_1 for a fiber with a unique (-1)-curve");
}

/// Multiplicities of the germ at the successive centers of one pair.
inline std::vector<i64> blowup_multiplicities(i64 c, i64 p)
{
    if (p < 1 || p > c) throw DomainError("need 1 <= p <= c");
    std::vector<i64> mu;
    while (true) {
        mu.push_back(p);
        if (c == p) break;
        if (c - p >= p) c -= p;
        else std::tie(c, p) = std::pair{p, c - p};
    }
    return mu;
}

struct MuSums {
    i64 gcd, sum_mu, sum_mu_sq;
    bool operator==(const MuSums&) const = default;
};

inline MuSums mu_sums(i64 c, i64 p)
{
    if (p > c) throw DomainError("mu_sums expects p <= c");
    if (p < 1) throw DomainError("mu_sums expects p >= 1");
    i64 g = gcd64(c, p);
    return {g, c + p - g, c * p};
}

inline MuSums mu_sums_simulated(i64 c, i64 p)
{
    MuSums r{gcd64(c, p), 0, 0};
    for (i64 m : blowup_multiplicities(c, p)) {
        r.sum_mu += m;
        r.sum_mu_sq += m * m;
    }
    return r;
}

/// A fiber of a P^1-ruling; node 0 is the component U of multiplicity one.
struct Fiber {
    std::vector<int> w;
    std::vector<i64> m;
    std::vector<int> pair;
    std::vector<std::vector<int>> adj;
    int C = -1;
    std::vector<int> ends;

    int size() const { return static_cast<int>(w.size()); }
    int add(int weight, i64 mult, int pr)
    {
        w.push_back(weight);
        m.push_back(mult);
        pair.push_back(pr);
        adj.emplace_back();
        return size() - 1;
    }
    void link(int a, int b)
    {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    void unlink(int a, int b)
    {
        std::erase(adj[a], b);
        std::erase(adj[b], a);
    }
    Tree tree() const
    {
        Tree t;
        t.w = w;
        for (int a = 0; a < size(); ++a)
            for (int b : adj[a])
                if (a < b) t.edges.push_back({a, b});
        return t;
    }
};

inline Fiber reconstruct_fiber(const CharPairSeq& seq)
{
    validate_pairs(seq);
    Fiber F;
    F.add(0, 1, 0);
    if (is_smooth(seq)) return F;
    int cur = 0;
    for (size_t k = 0; k < seq.size(); ++k) {
        auto [c, p] = seq[k];
        int A = cur, B = -1;
        while (true) {
            int X = F.add(1, F.m[A] + (B >= 0 ? F.m[B] : 0), static_cast<int>(k) + 1);
            F.w[A]++;
            if (B >= 0) {
                F.w[B]++;
                F.unlink(A, B);
                F.link(X, B);
            }
            F.link(X, A);
            if (c == p) {
                cur = X;
                break;
            }
            if (c - p >= p) {
                c -= p;
                B = X;
            } else {
                std::tie(c, p) = std::pair{p, c - p};
                B = A;
                A = X;
            }
        }
        F.ends.push_back(cur);
    }
    F.C = F.ends.back();
    return F;
}

inline std::vector<int> tree_path(const std::vector<std::vector<int>>& adj, int a, int b)
{
    std::vector<int> prev(adj.size(), -2), queue{a};
    prev[a] = -1;
    for (size_t k = 0; k < queue.size(); ++k)
        for (int v : adj[queue[k]])
            if (prev[v] == -2) {
                prev[v] = queue[k];
                queue.push_back(v);
            }
    if (prev[b] == -2) return {};
    std::vector<int> out{b};
    while (out.back() != a) out.push_back(prev[out.back()]);
    std::reverse(out.begin(), out.end());
    return out;
}

/// Weights along the fiber when it is a chain starting at U.
inline std::optional<Chain> fiber_chain(const Fiber& F)
{
    Chain out;
    int prev = -1, cur = 0;
    while (cur >= 0) {
        out.push_back(F.w[cur]);
        int next = -1, count = 0;
        for (int v : F.adj[cur])
            if (v != prev) {
                next = v;
                ++count;
            }
        if (count > 1) return std::nullopt;
        prev = cur;
        cur = next;
    }
    return out;
}

namespace detail {

inline void fiber_token(const Fiber& F, int v, std::string& out)
{
    out += std::to_string(F.w[v]);
    if (v == F.C) out += "*";
    out += ":" + std::to_string(F.m[v]);
}

inline void side_chain(const Fiber& F, int from, int start, std::string& out)
{
    out += "{";
    int prev = from, cur = start;
    bool first = true;
    while (cur >= 0) {
        if (!first) out += ",";
        first = false;
        fiber_token(F, cur, out);
        int next = -1;
        for (int v : F.adj[cur])
            if (v != prev) next = v;
        prev = cur;
        cur = next;
    }
    out += "}";
}

} // namespace detail

/// Components as weight:multiplicity along the path from U through C; side chains in braces.
inline std::string format_fiber(const Fiber& F)
{
    std::vector<int> line = F.C >= 0 ? tree_path(F.adj, 0, F.C) : std::vector<int>{0};
    while (true) {
        int last = line.back(), prev = line.size() > 1 ? line[line.size() - 2] : -1;
        int next = -1;
        for (int v : F.adj[last])
            if (v != prev) next = v;
        if (next < 0 || static_cast<int>(F.adj[last].size()) > (prev >= 0 ? 2 : 1)) break;
        line.push_back(next);
    }
    std::vector<bool> on(F.size(), false);
    for (int v : line) on[v] = true;
    std::string out = "[";
    for (size_t i = 0; i < line.size(); ++i) {
        if (i) out += ",";
        detail::fiber_token(F, line[i], out);
        for (int v : F.adj[line[i]])
            if (!on[v]) detail::side_chain(F, line[i], v, out);
    }
    return out + "]";
}

/// Inverse of format_fiber; multiplicities are optional (0 when absent).
inline Fiber parse_fiber(std::string_view s)
{
    Fiber F;
    size_t i = 0;
    auto skip = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
    auto integer = [&]() -> long {
        skip();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i || i - start > 12) throw ParseError("expected integer", start);
        return std::stol(std::string(s.substr(start, i - start)));
    };
    auto expect = [&](char ch) {
        skip();
        if (i >= s.size() || s[i] != ch) throw ParseError(std::string("expected '") + ch + "'", i);
        ++i;
    };
    auto peek = [&](char ch) {
        skip();
        return i < s.size() && s[i] == ch;
    };
    int marked = -1;
    auto list = [&](auto&& self, int parent, char close) -> void {
        int prev = parent;
        while (true) {
            int v = F.add(static_cast<int>(integer()), 0, 0);
            if (peek('*')) {
                ++i;
                if (marked >= 0) throw ParseError("two marked components", i);
                marked = v;
            }
            if (peek(':')) {
                ++i;
                F.m[v] = integer();
            }
            if (prev >= 0) F.link(prev, v);
            while (peek('{')) {
                ++i;
                self(self, v, '}');
            }
            prev = v;
            if (peek(',')) {
                ++i;
                continue;
            }
            expect(close);
            return;
        }
    };
    expect('[');
    list(list, -1, ']');
    skip();
    if (i != s.size()) throw ParseError("trailing input", i);
    if (marked >= 0) {
        F.C = marked;
    } else {
        for (int v = 0; v < F.size(); ++v)
            if (F.w[v] == 1) F.C = v;
    }
    return F;
}

namespace detail {

/// Reverses Euclid from the terminal state (1,1); stay[t] tells whether step t kept the first curve.
inline CharPair reduced_pair(const std::vector<bool>& stay)
{
    i64 c = 1, p = 1;
    for (size_t t = stay.size(); t-- > 0;) {
        i64 c0 = c + p;
        p = stay[t] ? p : c;
        c = c0;
    }
    return {c, p};
}

} // namespace detail

/// Undoes the blow-ups one (-1)-curve at a time and reads the pairs off the centers.
inline CharPairSeq pairs_from_fiber(const Fiber& fiber)
{
    int n = fiber.size();
    if (n == 0) throw DomainError("empty fiber");
    if (n == 1) {
        if (fiber.w[0] != 0) throw DomainError("a fiber with one component must have weight 0");
        return {{1, 0}};
    }
    int minus_one = 0;
    for (int x : fiber.w) minus_one += (x == 1);
    if (minus_one != 1) throw DomainError("fiber must have exactly one (-1)-curve");
    if (fiber.adj[0].size() != 1) throw DomainError("the first component must be a tip");

    std::vector<int> w = fiber.w;
    std::vector<std::vector<int>> adj = fiber.adj;
    std::vector<bool> alive(n, true);
    std::vector<std::pair<int, std::vector<int>>> steps;
    for (int left = n; left > 1; --left) {
        int X = -1;
        for (int v = 1; v < n; ++v)
            if (alive[v] && w[v] == 1) {
                if (X >= 0) throw DomainError("blow-down is not unique; not a fiber of this type");
                X = v;
            }
        if (X < 0) throw DomainError("no (-1)-curve to contract; not a fiber");
        std::vector<int> nb = adj[X];
        if (nb.empty() || nb.size() > 2) throw DomainError("(-1)-curve meets " + std::to_string(nb.size()) + " components");
        for (int v : nb) {
            --w[v];
            std::erase(adj[v], X);
        }
        if (nb.size() == 2) {
            adj[nb[0]].push_back(nb[1]);
            adj[nb[1]].push_back(nb[0]);
        }
        adj[X].clear();
        alive[X] = false;
        steps.push_back({X, nb});
    }
    if (w[0] != 0) throw DomainError("contracts to a curve of self-intersection " + std::to_string(-w[0]));
    std::reverse(steps.begin(), steps.end());

    std::vector<CharPair> reduced;
    size_t j = 0;
    while (j < steps.size()) {
        if (steps[j].second.size() != 1) throw DomainError("pair does not start at a free point");
        size_t k = j + 1;
        while (k < steps.size() && steps[k].second.size() == 2) ++k;
        size_t len = k - j;
        std::vector<int> A(len, -1);
        A[0] = steps[j].second[0];
        for (size_t t = 1; t + 1 < len; ++t) {
            const auto& S = steps[j + t + 1].second;
            int Xt = steps[j + t].first;
            if (std::find(S.begin(), S.end(), Xt) == S.end()) throw DomainError("inconsistent blow-up centers");
            A[t] = S[0] == Xt ? S[1] : S[0];
        }
        std::vector<bool> stay(len > 0 ? len - 1 : 0, true);
        for (size_t t = 1; t + 1 < len; ++t) stay[t - 1] = (A[t] == A[t - 1]);
        reduced.push_back(detail::reduced_pair(stay));
        j = k;
    }
    CharPairSeq out(reduced.size());
    i64 scale = 1;
    for (size_t i = reduced.size(); i-- > 0;) {
        out[i] = {reduced[i].first * scale, reduced[i].second * scale};
        scale = out[i].first;
    }
    return out;
}

struct FiberNumerics {
    i64 CE = 0, c_h = 1, c_h_prime = 0, kappa = 0, rho = 0, d_contrib = 0;
};

/// For c_h = 1 the fiber misses Delta and c_h' = 0; otherwise c_h' = c_h - i0.
inline FiberNumerics fiber_numerics(const CharPairSeq& seq, i64 CE, i64 i0)
{
    validate_pairs(seq);
    if (CE < 0) throw DomainError("C.E must be nonnegative");
    FiberNumerics r;
    r.CE = CE;
    r.c_h = seq.back().first;
    if (r.c_h == 1) {
        if (i0 != 0) throw DomainError("i0 must be 0 when c_h = 1");
        r.c_h_prime = 0;
    } else {
        if (i0 < 1 || i0 >= r.c_h) throw DomainError("need 1 <= i0 < c_h");
        r.c_h_prime = r.c_h - i0;
    }
    r.kappa = r.c_h * CE + r.c_h_prime;
    r.rho = r.kappa * CE + r.c_h_prime * CE + r.c_h_prime;
    r.d_contrib = seq[0].first / r.c_h * r.kappa;
    return r;
}

} // namespace dgk
