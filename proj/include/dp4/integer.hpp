#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dp4 {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using boost::multiprecision::numerator;
using boost::multiprecision::denominator;

inline int sign(const Integer& n) { return n.sign(); }

inline Integer abs(const Integer& n) { return n < 0 ? Integer(-n) : n; }

/// Least nonnegative residue.
inline Integer mod(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += (m < 0 ? Integer(-m) : m);
    return r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t mod(const Integer& a, std::int64_t m) {
    return static_cast<std::int64_t>(mod(a, Integer(m)));
}

inline Integer gcd(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return abs(a / gcd(a, b) * b);
}

/// p-adic valuation of a nonzero integer.
inline int valuation(Integer n, const Integer& p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// Removes every factor p from n; returns the unit part and stores the exponent.
inline Integer strip(Integer n, const Integer& p, int& v) {
    if (n == 0) throw std::domain_error("strip of zero");
    v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return n;
}

inline Integer pow(Integer base, unsigned e) {
    return boost::multiprecision::pow(base, e);
}

inline Integer isqrt(const Integer& n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Integer& n) {
    if (n < 0) return false;
    Integer r = isqrt(n);
    return r * r == n;
}

inline bool is_square(const Rational& q) {
    return is_square(numerator(q)) && is_square(denominator(q));
}

/// Modular inverse of a mod m (m > 1); throws if not invertible.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, r = mod(a, m);
    while (r != 0) {
        std::int64_t q = g / r;
        std::int64_t t = g - q * r;
        g = r;
        r = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw std::domain_error("not invertible");
    return mod(x, m);
}

inline Integer inverse_mod(const Integer& a, const Integer& m) {
    Integer g = m, x = 0, x1 = 1, r = mod(a, m);
    while (r != 0) {
        Integer q = g / r;
        Integer t = g - q * r;
        g = r;
        r = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw std::domain_error("not invertible");
    return mod(x, m);
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

inline std::string to_string(const Integer& n) { return n.str(); }

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses an optionally signed decimal integer; rejects anything else.
inline Integer parse_integer(std::string_view s) {
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9')
            throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    Integer n(std::string(s.substr(i)));
    return s[0] == '-' ? Integer(-n) : n;
}

/// Parses "n" or "n/d" with d nonzero.
inline Rational parse_rational(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(s));
    Integer d = parse_integer(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(s) + "'");
    return Rational(parse_integer(s.substr(0, slash)), d);
}

inline bool fits_int64(const Integer& n) {
    return n >= std::numeric_limits<std::int64_t>::min() &&
           n <= std::numeric_limits<std::int64_t>::max();
}

} // namespace dp4
