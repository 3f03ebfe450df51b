#pragma once

// Invariants of binary quintics by transvectants, and points of P(1,2,3).

#include "dp4/arith.hpp"
#include "dp4/binary_form.hpp"
#include "dp4/surface.hpp"

#include <string>

namespace dp4 {

namespace detail {

inline Integer factorial(int n) {
    Integer r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Integer binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

/// d^(a+b) f / du^a dv^b.
inline BinaryForm derivative(BinaryForm f, int a, int b) {
    for (int i = 0; i < a; ++i) f = f.partial_u();
    for (int i = 0; i < b; ++i) f = f.partial_v();
    return f;
}

} // namespace detail

/// k-th transvectant, normalised so that (u^2, v^2)_2 = 1.
inline BinaryForm transvectant(const BinaryForm& f, const BinaryForm& g, int k) {
    int m = f.degree(), n = g.degree();
    if (k < 0 || k > m || k > n) throw std::domain_error("transvectant: k must lie in [0, min(deg f, deg g)]");
    Rational scale(detail::factorial(m - k) * detail::factorial(n - k), detail::factorial(m) * detail::factorial(n));
    BinaryForm acc(std::vector<Rational>(static_cast<std::size_t>(m + n - 2 * k) + 1, Rational(0)));
    for (int i = 0; i <= k; ++i) {
        BinaryForm term = detail::derivative(f, k - i, i) * detail::derivative(g, i, k - i);
        Rational c(detail::binomial(k, i));
        if (i % 2) c = -c;
        acc = acc + term * c;
    }
    return acc * scale;
}

struct InvariantTriple {
    Rational I4, I8, I12;

    bool is_zero() const { return I4 == 0 && I8 == 0 && I12 == 0; }
    friend bool operator==(const InvariantTriple&, const InvariantTriple&) = default;
};

/// i = (f,f)_4, j = (f,i)_2, c = (j,j)_2; I4 = (i,i)_2, I8 = (c,i)_2, I12 = (c,c)_2.
inline InvariantTriple fundamental_invariants(const BinaryForm& f) {
    if (f.degree() != 5) throw std::domain_error("fundamental_invariants: expected a quintic");
    BinaryForm i = transvectant(f, f, 4);
    BinaryForm j = transvectant(f, i, 2);
    BinaryForm c = transvectant(j, j, 2);
    return InvariantTriple{transvectant(i, i, 2)[0], transvectant(c, i, 2)[0], transvectant(c, c, 2)[0]};
}

inline InvariantTriple moduli_point(const SurfaceParams& s) {
    if (!is_nonsingular(s)) throw std::domain_error("moduli_point: surface " + s.to_string() + " is singular");
    return fundamental_invariants(pencil_quintic(s));
}

/// Equality in P(1,2,3) over the algebraic closure: matching zero pattern and
/// P_i^{w_j} Q_j^{w_i} = Q_i^{w_j} P_j^{w_i} for all pairs.
inline bool same_weighted_point(const InvariantTriple& P, const InvariantTriple& Q) {
    if (P.is_zero() && Q.is_zero()) throw std::domain_error("same_weighted_point: both triples are zero");
    const Rational* p[3] = {&P.I4, &P.I8, &P.I12};
    const Rational* q[3] = {&Q.I4, &Q.I8, &Q.I12};
    const unsigned w[3] = {1, 2, 3};
    for (int i = 0; i < 3; ++i)
        if ((*p[i] == 0) != (*q[i] == 0)) return false;
    auto rpow = [](const Rational& x, unsigned e) {
        Rational r(1);
        for (unsigned i = 0; i < e; ++i) r *= x;
        return r;
    };
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (rpow(*p[i], w[j]) * rpow(*q[j], w[i]) != rpow(*q[i], w[j]) * rpow(*p[j], w[i])) return false;
    return true;
}

/// Integral representative with trivial weighted content and sign fixed by the first
/// nonzero odd-weight coordinate. A lone nonzero coordinate maps to 1.
inline std::array<Integer, 3> canonical_triple(const InvariantTriple& t) {
    if (t.is_zero()) throw std::domain_error("canonical_triple: zero triple has no weighted point");
    const Rational* c[3] = {&t.I4, &t.I8, &t.I12};
    int nonzero = 0;
    for (auto* x : c) nonzero += *x != 0;
    std::array<Integer, 3> out{};
    if (nonzero == 1) {
        for (int i = 0; i < 3; ++i) out[i] = *c[i] != 0 ? 1 : 0;
        return out;
    }
    Integer L = 1;
    for (auto* x : c) L = lcm(L, Integer(denominator(*x)));
    Integer Lk = 1;
    for (int i = 0; i < 3; ++i) {
        Lk *= L;
        out[i] = numerator(*c[i] * Rational(Lk));
    }
    Integer g = 0;
    for (const auto& x : out) g = gcd(g, x);
    Integer content = 1;
    if (g > 1) {
        for (const auto& [p, e] : factor(g).factors) {
            int m = e;
            for (int i = 0; i < 3; ++i)
                if (out[i] != 0) m = std::min(m, valuation(out[i], p) / (i + 1));
            content *= pow(p, static_cast<unsigned>(m));
        }
    }
    Integer ck = 1;
    for (int i = 0; i < 3; ++i) {
        ck *= content;
        out[i] /= ck;
    }
    // lambda = -1 flips the odd-weight coordinates.
    const Integer& lead = out[0] != 0 ? out[0] : out[2];
    if (lead < 0) {
        out[0] = -out[0];
        out[2] = -out[2];
    }
    return out;
}

/// "I4/I8/I12" of the canonical representative.
inline std::string moduli_key(const InvariantTriple& t) {
    auto c = canonical_triple(t);
    return c[0].str() + "/" + c[1].str() + "/" + c[2].str();
}

inline InvariantTriple parse_moduli_key(const std::string& key) {
    auto a = key.find('/');
    auto b = a == std::string::npos ? a : key.find('/', a + 1);
    if (b == std::string::npos) throw std::invalid_argument("moduli key must be I4/I8/I12, got " + key);
    return InvariantTriple{Rational(parse_integer(key.substr(0, a))), Rational(parse_integer(key.substr(a + 1, b - a - 1))),
                           Rational(parse_integer(key.substr(b + 1)))};
}

} // namespace dp4
