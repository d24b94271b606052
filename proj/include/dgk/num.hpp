#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>
#include <stdexcept>
#include <string>

namespace dgk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using i64 = long long;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat frac(const Int& p, const Int& q) { return Rat(p, q); }

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// "p/q", or "p" when the denominator is 1.
inline std::string str(const Rat& r)
{
    Int q = den(r);
    if (q == 1) return num(r).str();
    return num(r).str() + "/" + q.str();
}

inline std::string str(const Int& n) { return n.str(); }

inline Rat parse_rat(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int q(s.substr(slash + 1));
        if (q == 0) throw DomainError("zero denominator in " + s);
        return Rat(Int(s.substr(0, slash)), q);
    } catch (const std::runtime_error&) {
        throw DomainError("not a fraction: " + s);
    }
}

inline bool is_square(const Int& n)
{
    if (n < 0) return false;
    Int r = boost::multiprecision::sqrt(n);
    return r * r == n;
}

/// positive integer that is a perfect square
inline bool is_positive_square(const Rat& r)
{
    return r > 0 && den(r) == 1 && is_square(num(r));
}

inline i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

} // namespace dgk
