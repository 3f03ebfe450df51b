#pragma once

// Exact number-theory kernel over Q: factorization, residue and Hilbert
// symbols at every place, quadratic splitting type, CRT and prime search.

#include "dp4/errors.hpp"
#include "dp4/integer.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dp4 {

// ---------------------------------------------------------------------------
// Primality and factorization

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

inline constexpr std::array<std::uint64_t, 12> kWitnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Deterministic for all n < 2^64 with the first twelve prime bases.
inline bool miller_rabin_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : kWitnesses) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : kWitnesses) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline bool miller_rabin_big(const Integer& n) {
    Integer d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Extra bases beyond 2^64; a probable-prime test there.
    static constexpr std::array<unsigned, 20> bases{2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                    31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
    for (unsigned a : bases) {
        Integer x = boost::multiprecision::powm(Integer(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline std::uint64_t pollard_brent_u64(std::uint64_t n, std::uint64_t c) {
    auto f = [&](std::uint64_t x) { return (mulmod_u64(x, x, n) + c) % n; };
    std::uint64_t y = 2, g = 1, q = 1, x = 0, ys = 0;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 128;
    while (g == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) y = f(y);
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = mulmod_u64(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
            k += m;
        }
        r <<= 1;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

inline Integer pollard_rho_big(const Integer& n, unsigned c) {
    Integer x = 2, y = 2, d = 1;
    while (d == 1) {
        x = (x * x + c) % n;
        y = (y * y + c) % n;
        y = (y * y + c) % n;
        d = gcd(abs(x - y), n);
    }
    return d;
}

} // namespace detail

/// Deterministic below 2^64; probable-prime (20 bases) above.
inline bool is_prime(const Integer& n) {
    if (n < 2) return false;
    if (n <= std::numeric_limits<std::uint64_t>::max())
        return detail::miller_rabin_u64(static_cast<std::uint64_t>(n));
    for (unsigned p : detail::kWitnesses)
        if (n % p == 0) return false;
    return detail::miller_rabin_big(n);
}

inline bool is_prime(std::int64_t n) { return n >= 2 && detail::miller_rabin_u64(static_cast<std::uint64_t>(n)); }

/// Sign and prime-power decomposition of a nonzero integer.
struct FactoredInteger {
    int sign = 1;
    std::vector<std::pair<Integer, int>> factors; // primes strictly increasing

    Integer value() const {
        Integer n = sign;
        for (const auto& [p, e] : factors) n *= pow(p, static_cast<unsigned>(e));
        return n;
    }

    std::vector<Integer> primes() const {
        std::vector<Integer> out;
        for (const auto& f : factors) out.push_back(f.first);
        return out;
    }

    friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;
};

namespace detail {

inline void split_cofactor(const Integer& n, std::vector<Integer>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    Integer d;
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        std::uint64_t m = static_cast<std::uint64_t>(n);
        std::uint64_t g = m;
        for (std::uint64_t c = 1; g == m; ++c) g = pollard_brent_u64(m, c);
        d = g;
    } else {
        d = n;
        for (unsigned c = 1; d == n; ++c) d = pollard_rho_big(n, c);
    }
    split_cofactor(d, out);
    split_cofactor(n / d, out);
}

} // namespace detail

/// Trial division to 10^4, then Pollard rho on the remaining cofactor.
inline FactoredInteger factor(const Integer& n) {
    if (n == 0) throw std::domain_error("factor: zero has no factorization");
    FactoredInteger result;
    result.sign = n < 0 ? -1 : 1;
    Integer m = abs(n);
    std::vector<Integer> primes;
    for (unsigned p = 2; p < 10000 && Integer(p) * p <= m; p += (p == 2 ? 1 : 2)) {
        while (m % p == 0) {
            primes.push_back(p);
            m /= p;
        }
    }
    if (m > 1) detail::split_cofactor(m, primes);
    std::sort(primes.begin(), primes.end());
    for (const auto& p : primes) {
        if (!result.factors.empty() && result.factors.back().first == p)
            ++result.factors.back().second;
        else
            result.factors.emplace_back(p, 1);
    }
    return result;
}

/// Odd primes with odd exponent in n.
inline std::vector<Integer> odd_valuation_primes(const Integer& n) {
    std::vector<Integer> out;
    for (const auto& [p, e] : factor(n).factors)
        if (e % 2 == 1 && p != 2) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------------------
// Residue symbols

inline int jacobi(Integer a, Integer n) {
    a = mod(a, n);
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            int r = static_cast<int>(n % 8);
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

inline int legendre(const Integer& a, const Integer& p) {
    if (p == 2 || !is_prime(p)) throw std::domain_error("legendre: modulus must be an odd prime");
    return jacobi(a, p);
}

/// Legendre symbol for an odd prime p that the caller already knows is prime.
inline int legendre_unchecked(std::int64_t a, std::int64_t p) {
    return jacobi(Integer(a), Integer(p));
}

// ---------------------------------------------------------------------------
// Places of Q

/// The real place (prime == 0) or a finite prime.
struct Place {
    Integer prime = 0;

    static Place real() { return Place{0}; }
    static Place finite(const Integer& p) {
        if (!is_prime(p)) throw std::domain_error("Place: " + p.str() + " is not prime");
        return Place{p};
    }

    bool is_real() const { return prime == 0; }
    std::string to_string() const { return is_real() ? std::string("inf") : prime.str(); }

    friend bool operator==(const Place&, const Place&) = default;
    friend bool operator<(const Place& a, const Place& b) { return a.prime < b.prime; }
};

inline Place parse_place(const std::string& s) {
    if (s == "inf") return Place::real();
    return Place::finite(parse_integer(s));
}

enum class Splitting { split, inert, ramified, real_positive, real_negative };

inline const char* to_string(Splitting s) {
    switch (s) {
    case Splitting::split: return "SPLIT";
    case Splitting::inert: return "INERT";
    case Splitting::ramified: return "RAMIFIED";
    case Splitting::real_positive: return "REAL_POSITIVE";
    case Splitting::real_negative: return "REAL_NEGATIVE";
    }
    return "?";
}

inline Splitting parse_splitting(const std::string& s) {
    for (auto v : {Splitting::split, Splitting::inert, Splitting::ramified, Splitting::real_positive,
                   Splitting::real_negative})
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown splitting type: " + s);
}

/// Behaviour of the place in Q(sqrt D): split iff D is a square in Q_p.
inline Splitting square_class(const Integer& D, const Place& v) {
    if (D == 0) throw std::domain_error("square_class: D must be nonzero");
    if (v.is_real()) return D > 0 ? Splitting::real_positive : Splitting::real_negative;
    int e = 0;
    Integer u = strip(D, v.prime, e);
    if (e % 2 == 1) return Splitting::ramified;
    if (v.prime == 2) {
        int r = static_cast<int>(mod(u, Integer(8)));
        if (r == 1) return Splitting::split;
        if (r == 5) return Splitting::inert;
        return Splitting::ramified;
    }
    return jacobi(u, v.prime) == 1 ? Splitting::split : Splitting::inert;
}

// ---------------------------------------------------------------------------
// Hilbert symbols

/// Hilbert symbol of two nonzero integers via the closed local formulas.
inline int hilbert_symbol(const Integer& a, const Integer& b, const Place& v) {
    if (a == 0 || b == 0) throw std::domain_error("hilbert_symbol: arguments must be nonzero");
    if (v.is_real()) return (a < 0 && b < 0) ? -1 : 1;
    const Integer& p = v.prime;
    int alpha = 0, beta = 0;
    Integer u = strip(a, p, alpha);
    Integer w = strip(b, p, beta);
    if (p == 2) {
        auto eps = [](const Integer& x) { return static_cast<int>(mod(x, Integer(4)) == 3); };
        auto omega = [](const Integer& x) {
            int r = static_cast<int>(mod(x, Integer(8)));
            return static_cast<int>(r == 3 || r == 5);
        };
        int exponent = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
        return exponent % 2 == 0 ? 1 : -1;
    }
    int s = 1;
    if ((alpha * beta) % 2 == 1 && mod(p, Integer(4)) == 3) s = -s;
    if (beta % 2 == 1) s *= jacobi(u, p);
    if (alpha % 2 == 1) s *= jacobi(w, p);
    return s;
}

/// Rationals are reduced to the integer n*d, which lies in the same square class.
inline int hilbert_symbol(const Rational& a, const Rational& b, const Place& v) {
    if (a == 0 || b == 0) throw std::domain_error("hilbert_symbol: arguments must be nonzero");
    return hilbert_symbol(Integer(numerator(a) * denominator(a)), Integer(numerator(b) * denominator(b)), v);
}

// ---------------------------------------------------------------------------
// Congruences and primes in progressions

/// Smallest nonnegative simultaneous solution for pairwise coprime moduli.
inline Integer crt_solve(const std::vector<std::pair<Integer, Integer>>& congruences) {
    Integer x = 0, m = 1;
    for (const auto& [r, n] : congruences) {
        if (n <= 0) throw std::domain_error("crt_solve: moduli must be positive");
        if (gcd(m, n) != 1) throw std::domain_error("crt_solve: moduli are not pairwise coprime");
        // x + m*t = r (mod n)
        Integer t = mod((r - x) * inverse_mod(mod(m, n), n), n);
        if (n == 1) t = 0;
        x += m * t;
        m *= n;
        x = mod(x, m);
    }
    return x;
}

inline constexpr std::uint64_t kDefaultDirichletCap = 1'000'000;

/// Least prime p >= start with p = residue (mod modulus) and p not in avoid.
inline Integer dirichlet_prime(const Integer& residue, const Integer& modulus, const std::set<Integer>& avoid,
                               const Integer& start, std::uint64_t cap = kDefaultDirichletCap) {
    if (modulus <= 0) throw std::domain_error("dirichlet_prime: modulus must be positive");
    if (gcd(residue, modulus) != 1) throw std::domain_error("dirichlet_prime: gcd(residue, modulus) != 1");
    Integer r = mod(residue, modulus);
    Integer lo = start < 2 ? Integer(2) : start;
    Integer c = r;
    if (c < lo) c += ((lo - c + modulus - 1) / modulus) * modulus;
    for (std::uint64_t i = 0; i < cap; ++i, c += modulus) {
        if (!avoid.contains(c) && is_prime(c)) return c;
    }
    throw bounded_search_error("dirichlet_prime: no prime = " + r.str() + " mod " + modulus.str() + " within " +
                               std::to_string(cap) + " candidates");
}

} // namespace dp4

namespace dp4 {

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
inline std::int64_t sqrt_mod_prime(std::int64_t a, std::int64_t p) {
    a = mod(a, p);
    if (a == 0) return 0;
    auto pw = [p](std::int64_t b, std::int64_t e) {
        return static_cast<std::int64_t>(detail::powmod_u64(static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(e),
                                                            static_cast<std::uint64_t>(p)));
    };
    if (pw(a, (p - 1) / 2) != 1) throw std::domain_error("sqrt_mod_prime: not a quadratic residue");
    if (p % 4 == 3) return pw(a, (p + 1) / 4);
    std::int64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    std::int64_t z = 2;
    while (pw(z, (p - 1) / 2) != p - 1) ++z;
    std::int64_t m = s, c = pw(z, q), t = pw(a, q), r = pw(a, (q + 1) / 2);
    while (t != 1) {
        std::int64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        std::int64_t b = c;
        for (std::int64_t j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

} // namespace dp4
