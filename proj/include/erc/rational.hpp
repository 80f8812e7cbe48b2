#pragma once

// Exact rationals for the school-algebra layer.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace erc {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline std::string to_string(const Integer& z) { return z.str(); }

/// "n" for integers, "n/d" otherwise; the sign goes on the numerator.
inline std::string to_string(const Rational& q)
{
    if (is_integer(q))
        return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline std::optional<Integer> exact_isqrt(const Integer& z)
{
    if (z < 0)
        return std::nullopt;
    Integer r = boost::multiprecision::sqrt(z);
    if (r * r != z)
        return std::nullopt;
    return r;
}

/// Rational square root when one exists; nullopt for negatives and
/// irrational roots.
inline std::optional<Rational> exact_sqrt(const Rational& q)
{
    auto n = exact_isqrt(numerator(q));
    auto d = exact_isqrt(denominator(q));
    if (!n || !d)
        return std::nullopt;
    return Rational(*n, *d);
}

} // namespace erc
