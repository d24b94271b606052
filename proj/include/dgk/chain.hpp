#pragma once

#include "graph.hpp"

#include <map>
#include <set>

namespace dgk {

/// d([a1,...,an]) = a1*d([a2..]) - d([a3..]), d([]) = 1.
inline Int disc(const Chain& c)
{
    Int cur = 1, prev = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        Int next = *it * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline Int disc(Chain::const_iterator b, Chain::const_iterator e) { return disc(Chain(b, e)); }

inline Int d_prime(const Chain& c) { return c.empty() ? Int(0) : disc(c.begin() + 1, c.end()); }

inline Int d_second(const Chain& c) { return c.size() < 2 ? Int(0) : disc(c.begin() + 2, c.end()); }

struct ChainInvariants {
    Int d, d_prime, d_second;
    Rat e, e_tilde, delta;
};

/// e = 1/(a1 - e(tail)), e([]) = 0
inline Rat e_recurrence(const Chain& c)
{
    Rat e = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        Rat q = Rat(*it) - e;
        if (q == 0) throw DomainError("continued fraction degenerates for " + print_chain(c));
        e = 1 / q;
    }
    return e;
}

inline Rat e_of(const Chain& c)
{
    Int d = disc(c);
    if (d == 0) throw DomainError("d = 0 for " + print_chain(c));
    return frac(d_prime(c), d);
}

inline Rat et_of(const Chain& c) { return e_of(reversed(c)); }

inline ChainInvariants invariants(const Chain& c)
{
    ChainInvariants r;
    r.d = disc(c);
    if (r.d == 0) throw DomainError("degenerate chain " + print_chain(c) + ": d = 0");
    r.d_prime = d_prime(c);
    r.d_second = d_second(c);
    r.e = frac(r.d_prime, r.d);
    r.e_tilde = frac(d_prime(reversed(c)), r.d);
    r.delta = frac(1, r.d);
    if (is_admissible(c) && e_recurrence(c) != r.e)
        throw std::logic_error("e mismatch for " + print_chain(c));
    return r;
}

inline Chain chain_from_e(Rat x)
{
    if (x <= 0 || x >= 1) throw DomainError("e must lie in (0,1), got " + str(x));
    Chain out;
    while (x != 0) {
        Rat inv = 1 / x;
        Int a = num(inv) / den(inv);
        if (a * den(inv) != num(inv)) a += 1;
        out.push_back(static_cast<int>(a));
        x = Rat(a) - inv;
    }
    return out;
}

inline Chain adjoint_chain(const Chain& c)
{
    if (c.empty() || !is_admissible(c)) throw DomainError("adjoint needs a nonempty admissible chain");
    return chain_from_e(1 - e_of(c));
}

/// Both orientations; e is a bijection onto {q/d : gcd(q,d) = 1}.
inline std::vector<Chain> oriented_chains(i64 d)
{
    std::vector<Chain> out;
    if (d < 2) return out;
    for (i64 q = 1; q < d; ++q)
        if (gcd64(q, d) == 1) out.push_back(chain_from_e(frac(q, d)));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Chain> enumerate_admissible_chains(i64 d)
{
    if (d < 2) throw DomainError("d must be at least 2");
    std::set<Chain> s;
    for (const Chain& c : oriented_chains(d)) s.insert(canonical_form(c));
    return {s.begin(), s.end()};
}

/// Shapes with e(R) + alpha/d(R) = 1.
inline bool classify_e_plus_alpha(int alpha, const Chain& r)
{
    auto twos = [&](size_t upto) {
        return std::all_of(r.begin(), r.begin() + upto, [](int w) { return w == 2; });
    };
    switch (alpha) {
    case 1: return twos(r.size());
    case 2: return !r.empty() && r.back() == 3 && twos(r.size() - 1);
    case 3:
        if (!r.empty() && r.back() == 4 && twos(r.size() - 1)) return true;
        return r.size() >= 2 && r.back() == 2 && r[r.size() - 2] == 3 && twos(r.size() - 2);
    default: throw DomainError("alpha must be 1, 2 or 3");
    }
}

/// Bounds on e([(k),c,...]): lower inclusive, upper strict.
inline std::pair<Rat, Rat> e_bounds(int k, int c)
{
    return {frac(k * (c - 1) + 1, k * (c - 1) + c), frac(k * (c - 2) + 1, k * (c - 2) + c - 1)};
}

} // namespace dgk
