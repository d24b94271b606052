#pragma once

#include "num.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgk {

/// Weights are minus self-intersections.
using Chain = std::vector<int>;

/// Twigs are stored tip-first: the last component meets the branch.
struct Fork {
    int b = 2;
    std::array<Chain, 3> twigs;

    bool operator==(const Fork&) const = default;
    auto operator<=>(const Fork&) const = default;
};

struct Tree {
    std::vector<int> w;
    std::vector<std::pair<int, int>> edges;

    int size() const { return static_cast<int>(w.size()); }
    std::vector<std::vector<int>> adjacency() const
    {
        std::vector<std::vector<int>> adj(w.size());
        for (auto [a, b] : edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        return adj;
    }
};

struct ParseError : DomainError {
    size_t pos;
    ParseError(const std::string& what, size_t p)
        : DomainError(what + " at position " + std::to_string(p)), pos(p) {}
};

inline Chain parse_chain(std::string_view s)
{
    size_t i = 0;
    auto skip = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
    auto integer = [&]() -> long {
        skip();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) throw ParseError("expected integer", start);
        if (i - start > 6) throw ParseError("integer too large", start);
        return std::stol(std::string(s.substr(start, i - start)));
    };
    Chain out;
    skip();
    if (i >= s.size() || s[i] != '[') throw ParseError("expected '['", i);
    ++i;
    skip();
    if (i < s.size() && s[i] == ']') {
        ++i;
    } else {
        while (true) {
            skip();
            if (i < s.size() && s[i] == '(') {
                ++i;
                long m = integer();
                skip();
                if (i >= s.size() || s[i] != ')') throw ParseError("expected ')'", i);
                ++i;
                out.insert(out.end(), m, 2);
            } else {
                size_t at = i;
                long w = integer();
                if (w < 1) throw ParseError("weight must be positive", at);
                out.push_back(static_cast<int>(w));
            }
            skip();
            if (i < s.size() && s[i] == ',') { ++i; continue; }
            if (i < s.size() && s[i] == ']') { ++i; break; }
            throw ParseError("expected ',' or ']'", i);
        }
    }
    skip();
    if (i != s.size()) throw ParseError("trailing input", i);
    return out;
}

/// Maximal runs of at least two 2's print as (m).
inline std::string print_chain(const Chain& c)
{
    std::string out = "[";
    size_t i = 0;
    bool first = true;
    while (i < c.size()) {
        if (!first) out += ",";
        first = false;
        size_t j = i;
        while (j < c.size() && c[j] == 2) ++j;
        if (j - i >= 2) {
            out += "(" + std::to_string(j - i) + ")";
            i = j;
        } else {
            out += std::to_string(c[i]);
            ++i;
        }
    }
    return out + "]";
}

inline Chain reversed(Chain c)
{
    std::reverse(c.begin(), c.end());
    return c;
}

inline Chain canonical_form(const Chain& c) { return std::min(c, reversed(c)); }

inline bool is_admissible(const Chain& c)
{
    return std::all_of(c.begin(), c.end(), [](int w) { return w >= 2; });
}

inline Tree tree_of(const Chain& c)
{
    Tree t;
    t.w = c;
    for (int i = 0; i + 1 < static_cast<int>(c.size()); ++i) t.edges.push_back({i, i + 1});
    return t;
}

/// Node 0 is the branch; each twig follows tip-first.
inline Tree tree_of(const Fork& f)
{
    Tree t;
    t.w.push_back(f.b);
    for (const Chain& tw : f.twigs) {
        int start = t.size();
        for (int w : tw) t.w.push_back(w);
        for (int i = start; i + 1 < t.size(); ++i) t.edges.push_back({i, i + 1});
        if (!tw.empty()) t.edges.push_back({t.size() - 1, 0});
    }
    return t;
}

using IntMatrix = std::vector<std::vector<Int>>;

/// Diagonal -w, off-diagonal 1 on edges.
inline IntMatrix intersection_matrix(const Tree& t)
{
    int n = t.size();
    IntMatrix m(n, std::vector<Int>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = -t.w[i];
    for (auto [a, b] : t.edges) m[a][b] = m[b][a] = 1;
    return m;
}

/// Bareiss fraction-free elimination.
inline Int determinant(IntMatrix a)
{
    int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline IntMatrix negated(IntMatrix m)
{
    for (auto& row : m)
        for (auto& x : row) x = -x;
    return m;
}

inline bool is_negative_definite(const Tree& t)
{
    IntMatrix m = negated(intersection_matrix(t));
    for (int k = 1; k <= t.size(); ++k) {
        IntMatrix lead(k, std::vector<Int>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) lead[i][j] = m[i][j];
        if (determinant(lead) <= 0) return false;
    }
    return true;
}

inline bool is_negative_definite(const Chain& c) { return is_negative_definite(tree_of(c)); }

} // namespace dgk
