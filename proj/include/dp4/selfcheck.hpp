#pragma once

// Property suites run by `dp4 selfcheck`; the test suite drives the same code.

#include "dp4/arith.hpp"
#include "dp4/constructor.hpp"
#include "dp4/moduli.hpp"
#include "dp4/surface.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace dp4 {

using SymbolFn = std::function<int(const Integer&, const Integer&, const Place&)>;

/// Deliberately broken 2-adic formula (epsilon term dropped), for mutation checks.
inline int hilbert_symbol_without_epsilon(const Integer& a, const Integer& b, const Place& v) {
    if (v.is_real() || v.prime != 2) return hilbert_symbol(a, b, v);
    int alpha = 0, beta = 0;
    Integer u = strip(a, 2, alpha), w = strip(b, 2, beta);
    auto omega = [](const Integer& x) {
        int r = static_cast<int>(mod(x, Integer(8)));
        return static_cast<int>(r == 3 || r == 5);
    };
    return (alpha * omega(w) + beta * omega(u)) % 2 == 0 ? 1 : -1;
}

struct SuiteResult {
    std::string name;
    bool pass = true;
    std::size_t cases = 0;
    std::string detail;
};

/// Random nonzero rational with numerator and denominator bounded by bound.
inline Rational random_rational(std::mt19937_64& rng, std::int64_t bound) {
    std::uniform_int_distribution<std::int64_t> num(-bound, bound), den(1, bound);
    std::int64_t n = 0;
    while (n == 0) n = num(rng);
    return Rational(Integer(n), Integer(den(rng)));
}

/// Product over infinity and the primes of 2ab of (a, b)_v equals 1.
inline bool product_formula_holds(const Rational& a, const Rational& b, const SymbolFn& symbol) {
    Integer x = numerator(a) * denominator(a), y = numerator(b) * denominator(b);
    std::set<Integer> primes{2};
    for (const auto& p : factor(x).primes()) primes.insert(p);
    for (const auto& p : factor(y).primes()) primes.insert(p);
    int prod = symbol(x, y, Place::real());
    for (const auto& p : primes) prod *= symbol(x, y, Place{p});
    return prod == 1;
}

inline SuiteResult reciprocity_suite(const SymbolFn& symbol = [](const Integer& a, const Integer& b,
                                                                  const Place& v) { return hilbert_symbol(a, b, v); },
                                     std::uint64_t seed = 20240607, std::size_t pairs = 200) {
    SuiteResult r;
    r.name = "reciprocity";
    std::mt19937_64 rng(seed);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
        Rational a = random_rational(rng, 10'000), b = random_rational(rng, 10'000);
        ++r.cases;
        if (!product_formula_holds(a, b, symbol)) ++failures;
    }
    // Small pairs with many unit classes mod 8, where 2-adic mistakes show.
    for (std::int64_t a = -12; a <= 12; ++a)
        for (std::int64_t b = -12; b <= 12; ++b) {
            if (a == 0 || b == 0) continue;
            ++r.cases;
            if (!product_formula_holds(Rational(a), Rational(b), symbol)) ++failures;
        }
    r.pass = failures == 0;
    r.detail = std::to_string(failures) + " product-formula failures";
    return r;
}

inline SuiteResult singularity_suite() {
    SuiteResult r;
    r.name = "singularity";
    std::size_t bad = 0;
    for (int D : {5, 13, 17})
        for (int A = -20; A <= 20; ++A)
            for (int B = -20; B <= 20; ++B) {
                SurfaceParams s{D, A, B};
                ++r.cases;
                if (is_nonsingular(s) != (pencil_quintic(s).is_squarefree() && s.D != 0)) ++bad;
            }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " discrepancies";
    return r;
}

/// Random integer matrix of determinant 1 with entries in [-bound, bound].
inline std::array<std::array<Rational, 2>, 2> random_unimodular(std::mt19937_64& rng, std::int64_t bound) {
    std::uniform_int_distribution<std::int64_t> d(-bound, bound);
    while (true) {
        std::int64_t a = d(rng), c = d(rng);
        if (std::gcd(a, c) != 1) continue;
        // b, d with a d - b c = 1, then shift by multiples of (a, c).
        std::int64_t x0 = a, x1 = c, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (x1 != 0) {
            std::int64_t q = x0 / x1;
            std::swap(x0, x1);
            x1 -= q * x0;
            std::swap(s0, s1);
            s1 -= q * s0;
            std::swap(t0, t1);
            t1 -= q * t0;
        }
        // s0 a + t0 c = x0 = +-1
        std::int64_t dd = s0 * x0, bb = -t0 * x0;
        std::int64_t shift = d(rng);
        bb += shift * a;
        dd += shift * c;
        if (std::abs(bb) > bound || std::abs(dd) > bound) continue;
        return {{{Rational(a), Rational(bb)}, {Rational(c), Rational(dd)}}};
    }
}

inline BinaryForm random_quintic(std::mt19937_64& rng, std::int64_t bound) {
    std::vector<Rational> c;
    for (int i = 0; i < 6; ++i) c.push_back(random_rational(rng, bound));
    return BinaryForm(std::move(c));
}

inline SuiteResult invariance_suite(std::uint64_t seed = 7, std::size_t trials = 50) {
    SuiteResult r;
    r.name = "invariance";
    std::mt19937_64 rng(seed);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        BinaryForm f = random_quintic(rng, 9);
        auto g = random_unimodular(rng, 10);
        ++r.cases;
        if (!(fundamental_invariants(f.substitute(g)) == fundamental_invariants(f))) ++bad;
    }
    std::uniform_int_distribution<std::int64_t> small(1, 5);
    for (std::size_t i = 0; i < 10; ++i) {
        BinaryForm f = random_quintic(rng, 9);
        Rational delta(small(rng) * (i % 2 ? -1 : 1));
        auto base = fundamental_invariants(f);
        auto moved = fundamental_invariants(f.substitute({{{delta, Rational(0)}, {Rational(0), Rational(1)}}}));
        Rational l = 1;
        for (int k = 0; k < 10; ++k) l *= delta;
        ++r.cases;
        if (!(moved == InvariantTriple{l * base.I4, l * l * base.I8, l * l * l * base.I12})) ++bad;
    }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " invariance failures";
    return r;
}

/// Odd primes p <= limit for which some square-class pattern has no admissible element.
inline std::vector<std::int64_t> pattern_exceptions(std::int64_t limit) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 3; p <= limit; p += 2) {
        if (!is_prime(p)) continue;
        for (int mask = 0; mask < 4; ++mask) {
            if (!find_pattern_element(p, mask & 1, mask & 2)) {
                out.push_back(p);
                break;
            }
        }
    }
    return out;
}

inline SuiteResult patterns_suite() {
    SuiteResult r;
    r.name = "patterns";
    auto ex = pattern_exceptions(101);
    r.cases = 25;
    r.pass = ex == std::vector<std::int64_t>{3, 5, 7, 13, 17};
    r.detail = "exceptions:";
    for (auto p : ex) r.detail += " " + std::to_string(p);
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"reciprocity", "singularity", "invariance", "patterns"};
    return names;
}

/// Runs one suite by name; fault "hilbert2" swaps in the broken 2-adic symbol.
inline SuiteResult run_suite(const std::string& name, const std::string& fault = "") {
    if (!fault.empty() && fault != "hilbert2") throw std::invalid_argument("unknown fault: " + fault);
    if (name == "reciprocity") {
        if (fault == "hilbert2") return reciprocity_suite(hilbert_symbol_without_epsilon);
        return reciprocity_suite();
    }
    if (name == "singularity") return singularity_suite();
    if (name == "invariance") return invariance_suite();
    if (name == "patterns") return patterns_suite();
    throw std::invalid_argument("unknown suite: " + name);
}

} // namespace dp4
