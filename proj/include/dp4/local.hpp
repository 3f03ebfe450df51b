#pragma once

// Local solvability of S^(D;A,B) over R and Q_p, with checkable witnesses.

#include "dp4/arith.hpp"
#include "dp4/errors.hpp"
#include "dp4/surface.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dp4 {

struct SearchLimits {
    int precision_cap = 12;                 // largest p-adic precision k tried
    std::uint64_t tuple_cap = 10'000'000;   // (t0, t1, t2) residue triples examined per scan
    std::uint64_t dirichlet_cap = kDefaultDirichletCap;
};

enum class SolvabilityRule {
    real_rule,
    split_point,
    unramified_count,
    ramified_simple_point,
    two_adic_congruence,
    brute_hensel,
};

inline const char* to_string(SolvabilityRule r) {
    switch (r) {
    case SolvabilityRule::real_rule: return "REAL_RULE";
    case SolvabilityRule::split_point: return "SPLIT_POINT";
    case SolvabilityRule::unramified_count: return "UNRAMIFIED_COUNT";
    case SolvabilityRule::ramified_simple_point: return "RAMIFIED_SIMPLE_POINT";
    case SolvabilityRule::two_adic_congruence: return "TWO_ADIC_CONGRUENCE";
    case SolvabilityRule::brute_hensel: return "BRUTE_HENSEL";
    }
    return "?";
}

inline SolvabilityRule parse_solvability_rule(const std::string& s) {
    for (auto r : {SolvabilityRule::real_rule, SolvabilityRule::split_point, SolvabilityRule::unramified_count,
                   SolvabilityRule::ramified_simple_point, SolvabilityRule::two_adic_congruence,
                   SolvabilityRule::brute_hensel})
        if (s == to_string(r)) return r;
    throw std::invalid_argument("unknown solvability rule: " + s);
}

/// Exact real point: t0, t1, t2 rational, t3 and t4 given by their (nonnegative) squares.
struct RealPoint {
    Rational t0, t1, t2, t3_squared, t4_squared;
};

/// A p-adic point known modulo p^precision, on the model with discriminant model_D.
struct LocalPoint {
    std::array<Integer, 5> t;
    int precision = 0;
};

struct SolvabilityWitness {
    Place place;
    SolvabilityRule rule = SolvabilityRule::brute_hensel;
    std::optional<LocalPoint> point;
    std::optional<RealPoint> real_point;
    int hensel_margin = 0;
    Integer model_D; // D / p^(2j): the isomorphic model the point lies on
};

enum class LocalStatus { solvable, unsolvable, undecided };

inline const char* to_string(LocalStatus s) {
    switch (s) {
    case LocalStatus::solvable: return "SOLVABLE";
    case LocalStatus::unsolvable: return "UNSOLVABLE";
    case LocalStatus::undecided: return "UNDECIDED";
    }
    return "?";
}

struct LocalSolvability {
    Place place;
    LocalStatus status = LocalStatus::undecided;
    std::optional<SolvabilityWitness> witness;
    std::string detail;
};

// ---------------------------------------------------------------------------
// Hypothesis checks shared with the Brauer evaluation

/// Ramified odd p with A mod p a square other than 0, -1, A^2+A+1 != 0 and B = -A/(A+1) mod p.
inline bool ramified_congruences_hold(const SurfaceParams& s, const Integer& p) {
    if (p == 2) return false;
    Integer a = mod(s.A, p);
    if (a == 0 || a == p - 1) return false;
    if (jacobi(a, p) != 1) return false;
    if (mod(a * a + a + 1, p) == 0) return false;
    Integer expected_b = mod(-a * inverse_mod(a + 1, p), p);
    return mod(s.B, p) == expected_b;
}

/// Sufficient 2-adic conditions for inert 2: v2(B-1) = f >= 1, v2(A) odd and v2(A) >= 2f + 3.
inline bool two_adic_congruence_holds(const SurfaceParams& s) {
    if (s.A == 0 || s.B == 1) return false;
    int f = valuation(s.B - 1, 2);
    int va = valuation(s.A, 2);
    return f >= 1 && va % 2 == 1 && va >= 2 * f + 3;
}

// ---------------------------------------------------------------------------
// Real place

/// Pick t1 = 1 and t0 with t0, t0 + A, t0 + B positive; then choose t2 so both
/// conics T2^2 - D T3^2 = C, T2^2 - D T4^2 = C' have real solutions.
inline SolvabilityWitness solvable_at_real(const SurfaceParams& s) {
    if (s.D == 0) throw std::domain_error("solvable_at_real: D must be nonzero");
    Integer t0 = std::max({Integer(1), Integer(1 - s.A), Integer(1 - s.B)});
    Integer c1 = t0;
    Integer c2 = (t0 + s.A) * (t0 + s.B);
    Integer t2 = s.D > 0 ? std::max(c1, c2) : Integer(0);
    RealPoint pt{Rational(t0), Rational(1), Rational(t2), Rational(t2 * t2 - c1) / Rational(s.D), Rational(t2 * t2 - c2) / Rational(s.D)};
    SolvabilityWitness w;
    w.place = Place::real();
    w.rule = SolvabilityRule::real_rule;
    w.real_point = pt;
    w.model_D = s.D;
    return w;
}

inline bool verify_real_point(const SurfaceParams& s, const RealPoint& pt) {
    if (pt.t3_squared < 0 || pt.t4_squared < 0) return false;
    Rational D(s.D), A(s.A), B(s.B);
    bool first = pt.t0 * pt.t1 == pt.t2 * pt.t2 - D * pt.t3_squared;
    bool second = (pt.t0 + A * pt.t1) * (pt.t0 + B * pt.t1) == pt.t2 * pt.t2 - D * pt.t4_squared;
    bool nonzero = pt.t0 != 0 || pt.t1 != 0 || pt.t2 != 0 || pt.t3_squared != 0 || pt.t4_squared != 0;
    return first && second && nonzero;
}

// ---------------------------------------------------------------------------
// Residue enumeration mod p^k

namespace detail {

inline std::int64_t checked_power(std::int64_t p, int k, std::int64_t limit) {
    std::int64_t m = 1;
    for (int i = 0; i < k; ++i) {
        if (m > limit / p) return -1;
        m *= p;
    }
    return m;
}

inline int valuation_mod(std::int64_t x, std::int64_t p, int k) {
    if (x == 0) return k;
    int v = 0;
    while (x % p == 0 && v < k) {
        x /= p;
        ++v;
    }
    return v;
}

} // namespace detail

/// Enumerates primitive solutions of both equations modulo p^k, one per projective
/// class: the first unit coordinate is normalised to 1.
class ResidueScanner {
public:
    static constexpr std::int64_t kMaxModulus = 4'000'000;

    ResidueScanner(const SurfaceParams& s, std::int64_t p, int k, Integer model_D, std::uint64_t tuple_cap)
        : p_(p), k_(k), model_D_(std::move(model_D)), cap_(tuple_cap) {
        if (k < 1) throw std::domain_error("ResidueScanner: precision must be positive");
        m_ = detail::checked_power(p, k, kMaxModulus);
        if (m_ < 0)
            throw bounded_search_error("modulus " + std::to_string(p) + "^" + std::to_string(k) + " exceeds scan limit");
        D_ = mod(model_D_, m_);
        A_ = mod(s.A, m_);
        B_ = mod(s.B, m_);
        scaled_squares_.build(m_, [&](std::int64_t x) { return mulmod(D_, mulmod(x, x, m_), m_); });
        squares_.build(m_, [&](std::int64_t x) { return mulmod(x, x, m_); });
    }

    std::int64_t modulus() const { return m_; }
    std::uint64_t examined() const { return examined_; }

    /// Tuples an exhaustive for_each examines: m^2 + m^2/p + 3 (m/p)^2.
    std::uint64_t full_scan_cost() const {
        auto m = static_cast<std::uint64_t>(m_), q = m / static_cast<std::uint64_t>(p_);
        return m * m + m * q + 3 * q * q;
    }

    /// Throws bounded_search_error now if an exhaustive scan would exceed the cap.
    void require_full_scan() const {
        if (full_scan_cost() > cap_)
            throw bounded_search_error("exhaustive scan mod " + std::to_string(p_) + "^" + std::to_string(k_) +
                                       " needs " + std::to_string(full_scan_cost()) + " tuples, cap " +
                                       std::to_string(cap_));
    }

    /// Calls visit(point) for each solution until it returns false. Throws
    /// bounded_search_error once more than tuple_cap triples (t0, t1, t2) or
    /// pairs (t0, t1) have been examined.
    template <class Visit>
    void for_each(Visit&& visit) {
        for (int chart = 0; chart < 5; ++chart) {
            if (!scan_chart(chart, visit)) return;
        }
    }

    /// Smallest valuation over the 2x2 Jacobian minors, capped at k.
    int minor_valuation(const Point5& t) const {
        std::array<__int128, 5> x{};
        for (int i = 0; i < 5; ++i) x[i] = t[i];
        __int128 D = D_, A = A_, B = B_;
        auto J = jacobian<__int128>(D, A, B, x);
        for (auto& row : J)
            for (auto& e : row) e %= m_;
        int best = k_;
        for (__int128 minor : minors(J)) {
            std::int64_t r = static_cast<std::int64_t>(((minor % m_) + m_) % m_);
            best = std::min(best, detail::valuation_mod(r, p_, k_));
        }
        return best;
    }

private:
    // Preimages of each residue under a map Z/m -> Z/m, in CSR layout.
    struct Buckets {
        std::vector<std::int32_t> offsets, values;

        template <class Key>
        void build(std::int64_t m, Key key) {
            offsets.assign(static_cast<std::size_t>(m) + 1, 0);
            std::vector<std::int32_t> keys(static_cast<std::size_t>(m));
            for (std::int64_t x = 0; x < m; ++x) {
                keys[x] = static_cast<std::int32_t>(key(x));
                ++offsets[static_cast<std::size_t>(keys[x]) + 1];
            }
            for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
            values.resize(static_cast<std::size_t>(m));
            std::vector<std::int32_t> fill(offsets.begin(), offsets.end() - 1);
            for (std::int64_t x = 0; x < m; ++x) values[static_cast<std::size_t>(fill[keys[x]]++)] = static_cast<std::int32_t>(x);
        }

        std::pair<const std::int32_t*, const std::int32_t*> operator[](std::int64_t r) const {
            return {values.data() + offsets[r], values.data() + offsets[r + 1]};
        }
    };

    void tick() {
        if (++examined_ > cap_)
            throw bounded_search_error("residue scan mod " + std::to_string(p_) + "^" + std::to_string(k_) +
                                       " exceeded " + std::to_string(cap_) + " tuples");
    }

    template <class Visit>
    bool scan_chart(int chart, Visit& visit) {
        // Coordinates before the chart index are non-units, the chart coordinate is 1.
        auto range = [&](int i) {
            std::vector<std::int64_t> out;
            if (i < chart) {
                for (std::int64_t x = 0; x < m_; x += p_) out.push_back(x);
            } else if (i == chart) {
                out.push_back(1);
            } else {
                for (std::int64_t x = 0; x < m_; ++x) out.push_back(x);
            }
            return out;
        };
        const auto r0 = range(0), r1 = range(1), r2 = range(2);
        Point5 t{};
        for (std::int64_t t0 : r0) {
            for (std::int64_t t1 : r1) {
                std::int64_t prod = mulmod(mod(t0 + mulmod(A_, t1, m_), m_), mod(t0 + mulmod(B_, t1, m_), m_), m_);
                std::int64_t t0t1 = mulmod(t0, t1, m_);
                t[0] = t0;
                t[1] = t1;
                if (chart >= 3) {
                    // t3 or t4 is 1, which pins t2^2; t2 (and t3 in chart 4) divisible by p.
                    tick();
                    std::int64_t other = chart == 3 ? t0t1 : prod;
                    auto [b2, e2] = squares_[mod(other + D_, m_)];
                    for (auto it2 = b2; it2 != e2; ++it2) {
                        if (*it2 % p_ != 0) continue;
                        t[2] = *it2;
                        std::int64_t sq = mulmod(t[2], t[2], m_);
                        auto [b, e] = scaled_squares_[mod(sq - (chart == 3 ? prod : t0t1), m_)];
                        for (auto it = b; it != e; ++it) {
                            if (chart == 4 && *it % p_ != 0) continue;
                            t[3] = chart == 3 ? 1 : *it;
                            t[4] = chart == 3 ? *it : 1;
                            if (!visit(static_cast<const Point5&>(t))) return false;
                        }
                    }
                    continue;
                }
                for (std::int64_t t2 : r2) {
                    tick();
                    std::int64_t sq = mulmod(t2, t2, m_);
                    t[2] = t2;
                    auto [b3, e3] = scaled_squares_[mod(sq - t0t1, m_)];
                    if (b3 == e3) continue;
                    auto [b4, e4] = scaled_squares_[mod(sq - prod, m_)];
                    for (auto i = b3; i != e3; ++i) {
                        t[3] = *i;
                        for (auto j = b4; j != e4; ++j) {
                            t[4] = *j;
                            if (!visit(static_cast<const Point5&>(t))) return false;
                        }
                    }
                }
            }
        }
        return true;
    }

    std::int64_t p_;
    int k_;
    Integer model_D_;
    std::uint64_t cap_;
    std::int64_t m_ = 1;
    std::int64_t D_ = 0, A_ = 0, B_ = 0;
    Buckets scaled_squares_; // x by D x^2
    Buckets squares_;        // x by x^2
    std::uint64_t examined_ = 0;
};

struct ScanOutcome {
    std::optional<SolvabilityWitness> witness;
    bool any_solution = false; // some primitive solution mod p^k exists at all
};

namespace detail {

inline std::int64_t small_prime(const Integer& p) {
    if (!fits_int64(p) || p > ResidueScanner::kMaxModulus)
        throw bounded_search_error("prime " + p.str() + " is too large for residue enumeration");
    return static_cast<std::int64_t>(p);
}

inline ScanOutcome scan_for_witness(const SurfaceParams& s, std::int64_t p, int k, std::uint64_t cap) {
    Integer model = normalize_discriminant(s.D, p);
    ResidueScanner scanner(s, p, k, model, cap);
    ScanOutcome out;
    int allowed = (k - 1) / 2;
    scanner.for_each([&](const Point5& t) {
        out.any_solution = true;
        int e = scanner.minor_valuation(t);
        if (e > allowed) return true;
        SolvabilityWitness w;
        w.place = Place{p};
        w.rule = SolvabilityRule::brute_hensel;
        LocalPoint lp;
        for (int i = 0; i < 5; ++i) lp.t[i] = t[i];
        lp.precision = k;
        w.point = lp;
        w.hensel_margin = e;
        w.model_D = model;
        out.witness = w;
        return false;
    });
    return out;
}

} // namespace detail

/// Exhaustive scan of normalised representatives mod p^k for a point satisfying the
/// Hensel criterion: both equations vanish mod p^k and some 2x2 minor of the Jacobian
/// has valuation e with 2e + 1 <= k.
inline std::optional<SolvabilityWitness> find_smooth_point_mod_pk(const SurfaceParams& s, const Integer& p, int k,
                                                                  std::uint64_t tuple_cap = SearchLimits{}.tuple_cap) {
    if (!is_prime(p)) throw std::domain_error("find_smooth_point_mod_pk: p must be prime");
    if (k < 1) throw std::domain_error("find_smooth_point_mod_pk: k must be positive");
    return detail::scan_for_witness(s, detail::small_prime(p), k, tuple_cap).witness;
}

/// Independent re-check of a p-adic witness in exact integer arithmetic.
inline bool verify_hensel_witness(const SurfaceParams& s, const SolvabilityWitness& w) {
    if (!w.point || w.place.is_real()) return false;
    const Integer& p = w.place.prime;
    // model_D must be D divided by an even power of p.
    Integer ratio = s.D;
    if (w.model_D == 0 || ratio % w.model_D != 0) return false;
    ratio /= w.model_D;
    if (ratio < 0) return false;
    int v = ratio == 1 ? 0 : valuation(ratio, p);
    if (pow(p, static_cast<unsigned>(v)) != ratio || v % 2 != 0) return false;

    const auto& t = w.point->t;
    int k = w.point->precision;
    int e = w.hensel_margin;
    if (e < 0 || 2 * e + 1 > k) return false;
    bool primitive = false;
    for (const auto& x : t)
        if (x % p != 0) primitive = true;
    if (!primitive) return false;
    Integer pk = pow(p, static_cast<unsigned>(2 * e + 1));
    if (first_equation<Integer>(w.model_D, t) % pk != 0) return false;
    if (second_equation<Integer>(w.model_D, s.A, s.B, t) % pk != 0) return false;
    Integer pe1 = pow(p, static_cast<unsigned>(e + 1));
    for (const auto& m : minors(jacobian<Integer>(w.model_D, s.A, s.B, t)))
        if (m % pe1 != 0) return true;
    return false;
}

/// Witness (1 : 0 : 1 : t3 : 0) with t3^2 D' = 1 mod p^k, where D' is the unit part
/// of D; valid when D is a square in Q_p.
inline SolvabilityWitness split_point_witness(const SurfaceParams& s, const Integer& p) {
    if (square_class(s.D, Place{p}) != Splitting::split)
        throw std::domain_error("split_point_witness: " + p.str() + " is not split");
    Integer model = normalize_discriminant(s.D, p);
    Integer t3;
    int k;
    if (p == 2) {
        t3 = 1; // model = 1 mod 8
        k = 3;
    } else {
        std::int64_t pp = detail::small_prime(p);
        t3 = inverse_mod(sqrt_mod_prime(mod(model, pp), pp), pp);
        k = 1;
    }
    SolvabilityWitness w;
    w.place = Place{p};
    w.rule = SolvabilityRule::split_point;
    w.point = LocalPoint{{Integer(1), Integer(0), Integer(1), t3, Integer(0)}, k};
    w.model_D = model;
    return w;
}

inline bool verify_split_witness(const SurfaceParams& s, const SolvabilityWitness& w) {
    if (!w.point || w.place.is_real()) return false;
    const Integer& p = w.place.prime;
    if (w.model_D != normalize_discriminant(s.D, p) || w.model_D % p == 0) return false;
    const auto& t = w.point->t;
    if (t[0] != 1 || t[1] != 0 || t[2] != 1 || t[4] != 0) return false;
    int k = w.point->precision;
    // A unit congruent to 1 mod p (odd p) or mod 8 (p = 2) is a square.
    if (p == 2 ? k < 3 : k < 1) return false;
    return mod(t[3] * t[3] * w.model_D - 1, pow(p, static_cast<unsigned>(k))) == 0;
}

inline bool verify_witness(const SurfaceParams& s, const SolvabilityWitness& w) {
    switch (w.rule) {
    case SolvabilityRule::real_rule: return w.place.is_real() && w.real_point && verify_real_point(s, *w.real_point);
    case SolvabilityRule::split_point: return verify_split_witness(s, w);
    case SolvabilityRule::two_adic_congruence:
        return w.place == Place{2} && square_class(s.D, w.place) == Splitting::inert && two_adic_congruence_holds(s);
    case SolvabilityRule::unramified_count:
        return verify_hensel_witness(s, w) && w.place.prime != 2 &&
               square_class(s.D, w.place) != Splitting::ramified;
    case SolvabilityRule::ramified_simple_point:
        return verify_hensel_witness(s, w) && square_class(s.D, w.place) == Splitting::ramified &&
               ramified_congruences_hold(s, w.place.prime);
    case SolvabilityRule::brute_hensel: return verify_hensel_witness(s, w);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Per-place dispatch

namespace detail {

/// k = 1, 3, 5, ... up to the cap; UNSOLVABLE only if some level has no primitive
/// solutions at all.
inline LocalSolvability escalate(const SurfaceParams& s, const Integer& p, SolvabilityRule rule,
                                 const SearchLimits& limits) {
    LocalSolvability out;
    out.place = Place{p};
    std::int64_t pp;
    try {
        pp = small_prime(p);
    } catch (const bounded_search_error& e) {
        out.detail = e.what();
        return out;
    }
    for (int k = 1; k <= limits.precision_cap; k += 2) {
        try {
            ScanOutcome scan = scan_for_witness(s, pp, k, limits.tuple_cap);
            if (scan.witness) {
                scan.witness->rule = rule;
                out.status = LocalStatus::solvable;
                out.witness = scan.witness;
                return out;
            }
            if (!scan.any_solution) {
                out.status = LocalStatus::unsolvable;
                out.detail = "no primitive solution modulo " + p.str() + "^" + std::to_string(k);
                return out;
            }
        } catch (const bounded_search_error& e) {
            out.detail = e.what();
            return out;
        }
    }
    out.detail = "no Hensel-liftable point up to precision " + std::to_string(limits.precision_cap);
    return out;
}

} // namespace detail

/// (1 : 1 : 1 : 0 : 0) reduces onto both planes T0 = T1 under the ramified congruences;
/// its (T0, T1) minor is 2(AB - 1), a unit.
inline std::optional<SolvabilityWitness> ramified_simple_point(const SurfaceParams& s, const Integer& p) {
    if (!ramified_congruences_hold(s, p)) return std::nullopt;
    SolvabilityWitness w;
    w.place = Place{p};
    w.rule = SolvabilityRule::ramified_simple_point;
    w.point = LocalPoint{{Integer(1), Integer(1), Integer(1), Integer(0), Integer(0)}, 1};
    w.model_D = normalize_discriminant(s.D, p);
    if (!verify_hensel_witness(s, w)) return std::nullopt;
    return w;
}

/// Odd p not dividing the normalised D: try t0 = 1 and small t1, t2, solving for
/// t3, t4 by square roots mod p. Prefers points where T0 + A*T1 is a unit.
inline std::optional<SolvabilityWitness> direct_smooth_point(const SurfaceParams& s, const Integer& p,
                                                             int attempts = 4096) {
    if (p == 2 || !fits_int64(p)) return std::nullopt;
    Integer model = normalize_discriminant(s.D, p);
    if (model % p == 0) return std::nullopt;
    const auto pp = static_cast<std::int64_t>(p);
    const std::int64_t dinv = inverse_mod(mod(model, pp), pp), a = mod(s.A, pp), b = mod(s.B, pp);
    int tried = 0;
    for (std::int64_t t1 = 1; t1 < pp; ++t1) {
        std::int64_t na = mod(1 + mulmod(a, t1, pp), pp), nb = mod(1 + mulmod(b, t1, pp), pp);
        if (na == 0) continue;
        std::int64_t prod = mulmod(na, nb, pp);
        for (std::int64_t t2 = 0; t2 < std::min<std::int64_t>(pp, 64); ++t2) {
            if (++tried > attempts) return std::nullopt;
            std::int64_t sq = mulmod(t2, t2, pp);
            std::int64_t c3 = mulmod(mod(sq - t1, pp), dinv, pp), c4 = mulmod(mod(sq - prod, pp), dinv, pp);
            if (legendre_unchecked(c3, pp) == -1 || legendre_unchecked(c4, pp) == -1) continue;
            SolvabilityWitness w;
            w.place = Place{p};
            w.rule = SolvabilityRule::unramified_count;
            w.point = LocalPoint{{Integer(1), Integer(t1), Integer(t2), Integer(sqrt_mod_prime(c3, pp)),
                                  Integer(sqrt_mod_prime(c4, pp))},
                                 1};
            w.model_D = model;
            if (verify_hensel_witness(s, w)) return w;
        }
    }
    return std::nullopt;
}

inline LocalSolvability solvable_at_p(const SurfaceParams& s, const Integer& p, const SearchLimits& limits = {}) {
    if (!is_prime(p)) throw std::domain_error("solvable_at_p: p must be prime");
    Place place{p};
    Splitting split = square_class(s.D, place);
    if (split == Splitting::split) {
        return LocalSolvability{place, LocalStatus::solvable, split_point_witness(s, p), ""};
    }
    if (p != 2) {
        if (split == Splitting::inert) {
            // Existence is guaranteed by the smooth point count of the reduction.
            if (auto w = direct_smooth_point(s, p)) return LocalSolvability{place, LocalStatus::solvable, w, ""};
            return detail::escalate(s, p, SolvabilityRule::unramified_count, limits);
        }
        if (ramified_congruences_hold(s, p)) {
            if (auto w = ramified_simple_point(s, p)) return LocalSolvability{place, LocalStatus::solvable, w, ""};
            return detail::escalate(s, p, SolvabilityRule::ramified_simple_point, limits);
        }
        return detail::escalate(s, p, SolvabilityRule::brute_hensel, limits);
    }
    if (split == Splitting::inert && two_adic_congruence_holds(s)) {
        SolvabilityWitness w;
        w.place = place;
        w.rule = SolvabilityRule::two_adic_congruence;
        w.model_D = s.D;
        return LocalSolvability{place, LocalStatus::solvable, w, ""};
    }
    return detail::escalate(s, p, SolvabilityRule::brute_hensel, limits);
}

inline LocalSolvability solvable_at(const SurfaceParams& s, const Place& v, const SearchLimits& limits = {}) {
    if (v.is_real()) return LocalSolvability{v, LocalStatus::solvable, solvable_at_real(s), ""};
    return solvable_at_p(s, v.prime, limits);
}

enum class AdelicVerdict { ok, undecided, empty };

inline const char* to_string(AdelicVerdict v) {
    switch (v) {
    case AdelicVerdict::ok: return "ADELIC_OK";
    case AdelicVerdict::undecided: return "ADELIC_UNDECIDED";
    case AdelicVerdict::empty: return "ADELIC_EMPTY";
    }
    return "?";
}

struct AdelicReport {
    AdelicVerdict verdict = AdelicVerdict::undecided;
    std::vector<LocalSolvability> locals;
    std::vector<Place> offending;
    std::string blanket;
};

/// The real place, 2 and the primes dividing D to odd order.
inline std::vector<Place> critical_solvability_places(const SurfaceParams& s) {
    std::vector<Place> out{Place::real(), Place{2}};
    for (const auto& p : odd_valuation_primes(s.D)) out.push_back(Place{p});
    return out;
}

inline const char* kUnramifiedBlanket =
    "every other prime is odd and unramified in Q(sqrt D): the reduction has a smooth F_p-point, so S(Q_p) is nonempty";

inline AdelicReport adelic_check(const SurfaceParams& s, const SearchLimits& limits = {}) {
    if (!is_nonsingular(s)) throw std::domain_error("adelic_check: surface " + s.to_string() + " is singular");
    AdelicReport report;
    report.blanket = kUnramifiedBlanket;
    bool undecided = false, empty = false;
    for (const auto& place : critical_solvability_places(s)) {
        auto r = solvable_at(s, place, limits);
        if (r.status == LocalStatus::undecided) {
            undecided = true;
            report.offending.push_back(place);
        } else if (r.status == LocalStatus::unsolvable) {
            empty = true;
            report.offending.push_back(place);
        }
        report.locals.push_back(std::move(r));
    }
    report.verdict = empty ? AdelicVerdict::empty : undecided ? AdelicVerdict::undecided : AdelicVerdict::ok;
    return report;
}

/// Number of F_p-points of the reduction with Jacobian of rank 2 (p odd, p not dividing D).
inline std::uint64_t count_smooth_points_mod_p(const SurfaceParams& s, std::int64_t p,
                                               std::uint64_t tuple_cap = SearchLimits{}.tuple_cap) {
    ResidueScanner scanner(s, p, 1, s.D, tuple_cap);
    scanner.require_full_scan();
    std::uint64_t n = 0;
    scanner.for_each([&](const Point5& t) {
        if (scanner.minor_valuation(t) == 0) ++n;
        return true;
    });
    return n;
}

} // namespace dp4
