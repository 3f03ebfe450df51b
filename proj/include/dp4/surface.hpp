#pragma once

// The family S^(D;A,B) in P^4:
//   T0*T1             = T2^2 - D*T3^2
//   (T0+A*T1)(T0+B*T1) = T2^2 - D*T4^2

#include "dp4/arith.hpp"
#include "dp4/binary_form.hpp"
#include "dp4/integer.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace dp4 {

struct SurfaceParams {
    Integer D = 1;
    Integer A = 0;
    Integer B = 0;

    /// Rejects D == 0 (a cone) and square D (no quadratic field for the Brauer class).
    static SurfaceParams checked(Integer D, Integer A, Integer B) {
        if (D == 0) throw std::domain_error("SurfaceParams: D must be nonzero");
        if (is_square(D)) throw std::domain_error("SurfaceParams: D = " + D.str() + " is a perfect square");
        return SurfaceParams{std::move(D), std::move(A), std::move(B)};
    }

    /// Canonical "D:A:B".
    std::string to_string() const { return D.str() + ":" + A.str() + ":" + B.str(); }

    static SurfaceParams parse(std::string_view s) {
        auto c1 = s.find(':');
        auto c2 = c1 == std::string_view::npos ? c1 : s.find(':', c1 + 1);
        if (c2 == std::string_view::npos || s.find(':', c2 + 1) != std::string_view::npos)
            throw std::invalid_argument("surface must be written D:A:B, got '" + std::string(s) + "'");
        return checked(parse_integer(s.substr(0, c1)), parse_integer(s.substr(c1 + 1, c2 - c1 - 1)),
                       parse_integer(s.substr(c2 + 1)));
    }

    friend bool operator==(const SurfaceParams&, const SurfaceParams&) = default;
};

using Point5 = std::array<std::int64_t, 5>;

// Equations and Jacobian, generic over the coordinate ring.

template <class T>
T first_equation(const T& D, const std::array<T, 5>& t) {
    return t[0] * t[1] - t[2] * t[2] + D * t[3] * t[3];
}

template <class T>
T second_equation(const T& D, const T& A, const T& B, const std::array<T, 5>& t) {
    return (t[0] + A * t[1]) * (t[0] + B * t[1]) - t[2] * t[2] + D * t[4] * t[4];
}

template <class T>
std::array<std::array<T, 5>, 2> jacobian(const T& D, const T& A, const T& B, const std::array<T, 5>& t) {
    T two(2);
    return {{{t[1], t[0], -two * t[2], two * D * t[3], T(0)},
             {two * t[0] + (A + B) * t[1], (A + B) * t[0] + two * A * B * t[1], -two * t[2], T(0),
              two * D * t[4]}}};
}

/// The ten 2x2 minors of a 2x5 matrix, in lexicographic column order.
template <class T>
std::array<T, 10> minors(const std::array<std::array<T, 5>, 2>& J) {
    std::array<T, 10> out{};
    int n = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) out[n++] = J[0][i] * J[1][j] - J[0][j] * J[1][i];
    return out;
}

/// ABD != 0, A != B and A^2 - 2AB + B^2 - 2A - 2B + 1 != 0.
inline bool is_nonsingular(const SurfaceParams& s) {
    const auto& [D, A, B] = s;
    if (A * B * D == 0 || A == B) return false;
    return A * A - 2 * A * B + B * B - 2 * A - 2 * B + 1 != 0;
}

/// u v (u+v) (u^2 + 2(A+B) u v + (A-B)^2 v^2): the degenerate members of the pencil
/// u*Q1 + v*Q2, in the fixed factor order {0, inf, -1, quadratic}. Independent of D.
inline BinaryForm pencil_quintic(const SurfaceParams& s) {
    BinaryForm u{Rational(1), Rational(0)};
    BinaryForm v{Rational(0), Rational(1)};
    BinaryForm u_plus_v{Rational(1), Rational(1)};
    Integer diff = s.A - s.B;
    BinaryForm quad{Rational(1), Rational(2 * (s.A + s.B)), Rational(diff * diff)};
    return u * v * u_plus_v * quad;
}

/// Symmetric Gram matrices of Q1 = T0T1 - T2^2 + D T3^2 and
/// Q2 = (T0+AT1)(T0+BT1) - T2^2 + D T4^2, so that Q(x) = x^T G x.
inline std::array<std::array<std::array<Rational, 5>, 5>, 2> gram_matrices(const SurfaceParams& s) {
    std::array<std::array<std::array<Rational, 5>, 5>, 2> g{};
    for (auto& m : g)
        for (auto& row : m) row.fill(Rational(0));
    auto& g1 = g[0];
    g1[0][1] = g1[1][0] = Rational(1, 2);
    g1[2][2] = -1;
    g1[3][3] = Rational(s.D);
    auto& g2 = g[1];
    g2[0][0] = 1;
    g2[0][1] = g2[1][0] = Rational(s.A + s.B, 2);
    g2[1][1] = Rational(s.A * s.B);
    g2[2][2] = -1;
    g2[4][4] = Rational(s.D);
    return g;
}

/// Quadratic form over F_p: coefficient of T_i T_j stored at [i][j], i <= j.
struct QuadraticFormModP {
    std::int64_t p = 2;
    std::array<std::array<std::int64_t, 5>, 5> c{};

    std::int64_t operator()(const Point5& t) const {
        std::int64_t acc = 0;
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j)
                if (c[i][j]) acc = mod(acc + mulmod(c[i][j], mulmod(mod(t[i], p), mod(t[j], p), p), p), p);
        return acc;
    }

    friend bool operator==(const QuadraticFormModP&, const QuadraticFormModP&) = default;
};

struct ReducedSurface {
    std::int64_t p = 2;
    Integer model_D;      // D after removing p^(2 floor(v/2)) when normalising
    std::int64_t D = 0;   // residues mod p
    std::int64_t A = 0;
    std::int64_t B = 0;
    QuadraticFormModP first;
    QuadraticFormModP second;
};

/// Replaces D by D / p^(2 floor(v_p(D)/2)); an isomorphic model via T3, T4 rescaling.
inline Integer normalize_discriminant(const Integer& D, const Integer& p) {
    int v = 0;
    Integer u = strip(D, p, v);
    return u * pow(p, static_cast<unsigned>(v % 2));
}

inline ReducedSurface reduce_mod_p(const SurfaceParams& s, std::int64_t p, bool normalize) {
    if (!is_prime(p)) throw std::domain_error("reduce_mod_p: p must be prime");
    ReducedSurface r;
    r.p = p;
    r.model_D = normalize ? normalize_discriminant(s.D, p) : s.D;
    r.D = mod(r.model_D, p);
    r.A = mod(s.A, p);
    r.B = mod(s.B, p);
    auto& f = r.first;
    f.p = p;
    f.c[0][1] = 1;
    f.c[2][2] = p - 1;
    f.c[3][3] = r.D;
    auto& g = r.second;
    g.p = p;
    g.c[0][0] = 1 % p;
    g.c[0][1] = mod(r.A + r.B, p);
    g.c[1][1] = mulmod(r.A, r.B, p);
    g.c[2][2] = p - 1;
    g.c[4][4] = r.D;
    for (auto* q : {&f, &g})
        for (auto& row : q->c)
            for (auto& x : row) x = mod(x, p);
    return r;
}

/// Rank over F_p of the 2x5 Jacobian at a point of the reduction.
inline int jacobian_rank_mod_p(const Point5& point, const SurfaceParams& s, std::int64_t p) {
    ReducedSurface r = reduce_mod_p(s, p, false);
    if (r.first(point) != 0 || r.second(point) != 0)
        throw std::domain_error("jacobian_rank_mod_p: point is not on the reduction mod " + std::to_string(p));
    std::array<std::int64_t, 5> t{};
    for (int i = 0; i < 5; ++i) t[i] = mod(point[i], p);
    auto J = jacobian<std::int64_t>(r.D, r.A, r.B, t);
    bool zero = true;
    for (auto& row : J)
        for (auto& x : row) {
            x = mod(x, p);
            if (x) zero = false;
        }
    if (zero) return 0;
    for (auto m : minors(J))
        if (mod(m, p) != 0) return 2;
    return 1;
}

} // namespace dp4
