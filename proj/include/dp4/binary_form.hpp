#pragma once

#include "dp4/integer.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace dp4 {

/// Binary form sum_i c_i u^(d-i) v^i with exact rational coefficients.
class BinaryForm {
public:
    BinaryForm() : coeffs_{Rational(0)} {}
    explicit BinaryForm(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::domain_error("BinaryForm: needs degree + 1 coefficients");
    }
    BinaryForm(std::initializer_list<Rational> coeffs) : BinaryForm(std::vector<Rational>(coeffs)) {}

    static BinaryForm from_integers(const std::vector<Integer>& c) {
        std::vector<Rational> r(c.begin(), c.end());
        return BinaryForm(std::move(r));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    const Rational& operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    BinaryForm operator*(const BinaryForm& o) const {
        std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
        }
        return BinaryForm(std::move(out));
    }

    BinaryForm operator*(const Rational& s) const {
        BinaryForm r = *this;
        for (auto& c : r.coeffs_) c *= s;
        return r;
    }

    BinaryForm operator+(const BinaryForm& o) const {
        if (o.degree() != degree()) throw std::domain_error("BinaryForm: adding forms of different degree");
        BinaryForm r = *this;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] += o.coeffs_[i];
        return r;
    }

    BinaryForm operator-(const BinaryForm& o) const { return *this + o * Rational(-1); }

    /// d/du; the derivative of a constant is the zero constant.
    BinaryForm partial_u() const {
        int d = degree();
        if (d == 0) return BinaryForm{Rational(0)};
        std::vector<Rational> out(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i)] * (d - i);
        return BinaryForm(std::move(out));
    }

    BinaryForm partial_v() const {
        int d = degree();
        if (d == 0) return BinaryForm{Rational(0)};
        std::vector<Rational> out(static_cast<std::size_t>(d));
        for (int i = 1; i <= d; ++i) out[static_cast<std::size_t>(i - 1)] = coeffs_[static_cast<std::size_t>(i)] * i;
        return BinaryForm(std::move(out));
    }

    /// f(a u + b v, c u + d v) for the matrix {{a, b}, {c, d}}.
    BinaryForm substitute(const std::array<std::array<Rational, 2>, 2>& g) const {
        int d = degree();
        BinaryForm x{g[0][0], g[0][1]};
        BinaryForm y{g[1][0], g[1][1]};
        std::vector<BinaryForm> xp{BinaryForm{Rational(1)}}, yp{BinaryForm{Rational(1)}};
        for (int i = 0; i < d; ++i) {
            xp.push_back(xp.back() * x);
            yp.push_back(yp.back() * y);
        }
        BinaryForm out(std::vector<Rational>(static_cast<std::size_t>(d) + 1, Rational(0)));
        for (int i = 0; i <= d; ++i) {
            if (coeffs_[static_cast<std::size_t>(i)] == 0) continue;
            out = out + xp[static_cast<std::size_t>(d - i)] * yp[static_cast<std::size_t>(i)] *
                            coeffs_[static_cast<std::size_t>(i)];
        }
        return out;
    }

    /// True iff the form has no repeated linear factor over the algebraic closure,
    /// i.e. gcd(f, df/du, df/dv) is constant.
    bool is_squarefree() const;

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) s += ", ";
            s += dp4::to_string(coeffs_[i]);
        }
        return s + "]";
    }

    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;

private:
    std::vector<Rational> coeffs_;
};

namespace detail {

// Univariate polynomials over Q, ascending powers, no trailing zeros.
using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_rem(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational q = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        trim(a);
    }
    return a;
}

inline Poly poly_gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace detail

inline bool BinaryForm::is_squarefree() const {
    if (is_zero()) return false;
    int d = degree();
    // v^m divides f iff the last m coefficients vanish.
    int mult_v = 0;
    while (coeffs_[static_cast<std::size_t>(d - mult_v)] == 0) ++mult_v;
    if (mult_v >= 2) return false;
    // Dehomogenise at v = 1: g(t) = sum c_i t^(d-i).
    detail::Poly g(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) g[static_cast<std::size_t>(d - i)] = coeffs_[static_cast<std::size_t>(i)];
    detail::trim(g);
    if (g.size() <= 2) return true;
    detail::Poly dg;
    for (std::size_t i = 1; i < g.size(); ++i) dg.push_back(g[i] * static_cast<int>(i));
    return detail::poly_gcd(g, dg).size() == 1;
}

} // namespace dp4
