#pragma once

// Local evaluation of the quaternion class attached to (T0+A*T1)/T0 and D,
// assembly of the global sum, and cross-checks.

#include "dp4/arith.hpp"
#include "dp4/errors.hpp"
#include "dp4/local.hpp"
#include "dp4/surface.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace dp4 {

enum class Quotient { a_over_t0, a_over_t1, b_over_t0, b_over_t1 };

inline const char* to_string(Quotient q) {
    switch (q) {
    case Quotient::a_over_t0: return "(T0+A*T1)/T0";
    case Quotient::a_over_t1: return "(T0+A*T1)/T1";
    case Quotient::b_over_t0: return "(T0+B*T1)/T0";
    case Quotient::b_over_t1: return "(T0+B*T1)/T1";
    }
    return "?";
}

inline Quotient parse_quotient(const std::string& s) {
    for (auto q : {Quotient::a_over_t0, Quotient::a_over_t1, Quotient::b_over_t0, Quotient::b_over_t1})
        if (s == to_string(q)) return q;
    throw std::invalid_argument("unknown quotient: " + s);
}

/// Local invariant in (1/2)Z/Z.
enum class Half { zero, half };

inline const char* to_string(Half h) { return h == Half::zero ? "0" : "1/2"; }

inline Half parse_half(const std::string& s) {
    if (s == "0") return Half::zero;
    if (s == "1/2") return Half::half;
    throw std::invalid_argument("invariant must be 0 or 1/2, got " + s);
}

inline Half operator+(Half a, Half b) { return a == b ? Half::zero : Half::half; }

inline Half from_symbol(int symbol) { return symbol == 1 ? Half::zero : Half::half; }

struct EvaluationWitness {
    Place place;
    Quotient quotient = Quotient::a_over_t0;
    Rational q;
    int symbol = 1;
    Half value = Half::zero;
    // Where q was taken: a p-adic point F = 0 mod p^precision with Hensel margin e
    // (q read modulo p^(precision - e)), or an exact real point.
    std::optional<LocalPoint> point;
    int hensel_margin = 0;
    std::optional<RealPoint> real_point;
};

/// Numerator and denominator of a quotient at (t0, t1), as integers.
inline std::pair<Integer, Integer> quotient_parts(Quotient which, const Integer& A, const Integer& B,
                                                  const Integer& t0, const Integer& t1) {
    switch (which) {
    case Quotient::a_over_t0: return {t0 + A * t1, t0};
    case Quotient::a_over_t1: return {t0 + A * t1, t1};
    case Quotient::b_over_t0: return {t0 + B * t1, t0};
    case Quotient::b_over_t1: return {t0 + B * t1, t1};
    }
    return {0, 1};
}

inline constexpr Quotient kQuotientOrder[] = {Quotient::a_over_t0, Quotient::a_over_t1, Quotient::b_over_t0,
                                              Quotient::b_over_t1};

/// Digits beyond the valuation needed to fix the square class of a unit.
inline int square_class_digits(const Integer& p) { return p == 2 ? 3 : 1; }

/// Evaluates at a p-adic point known modulo p^precision. The first quotient whose
/// numerator and denominator have known valuation and enough unit digits is used.
inline EvaluationWitness evaluate_at_point(const LocalPoint& point, const SurfaceParams& s, const Integer& p) {
    if (!is_prime(p)) throw std::domain_error("evaluate_at_point: p must be prime");
    int k = point.precision;
    int r = square_class_digits(p);
    Integer pk = pow(p, static_cast<unsigned>(std::max(k, 0)));
    for (Quotient which : kQuotientOrder) {
        auto [num, den] = quotient_parts(which, s.A, s.B, point.t[0], point.t[1]);
        num = mod(num, pk);
        den = mod(den, pk);
        if (num == 0 || den == 0) continue;
        if (valuation(num, p) + r > k || valuation(den, p) + r > k) continue;
        EvaluationWitness w;
        w.place = Place{p};
        w.quotient = which;
        w.q = Rational(num, den);
        w.symbol = hilbert_symbol(w.q, Rational(s.D), w.place);
        w.value = from_symbol(w.symbol);
        w.point = point;
        return w;
    }
    throw precision_error("evaluate_at_point: no quotient is determined modulo " + p.str() + "^" + std::to_string(k));
}

/// Evaluation at an exact real point.
inline EvaluationWitness evaluate_at_real_point(const RealPoint& pt, const SurfaceParams& s) {
    Rational A(s.A), B(s.B);
    for (Quotient which : kQuotientOrder) {
        Rational num = (which == Quotient::a_over_t0 || which == Quotient::a_over_t1) ? pt.t0 + A * pt.t1
                                                                                       : pt.t0 + B * pt.t1;
        Rational den = (which == Quotient::a_over_t0 || which == Quotient::b_over_t0) ? pt.t0 : pt.t1;
        if (num == 0 || den == 0) continue;
        EvaluationWitness w;
        w.place = Place::real();
        w.quotient = which;
        w.q = num / den;
        w.symbol = hilbert_symbol(w.q, Rational(s.D), w.place);
        w.value = from_symbol(w.symbol);
        w.real_point = pt;
        return w;
    }
    throw std::domain_error("evaluate_at_real_point: every quotient is undefined or zero");
}

// ---------------------------------------------------------------------------
// Local evaluation

enum class EvaluationStatus { constant, non_constant, undecided };
enum class EvaluationRule { split_zero, unramified_zero, ramified_legendre, real_positive_zero, sampled };

inline const char* to_string(EvaluationStatus s) {
    switch (s) {
    case EvaluationStatus::constant: return "CONSTANT";
    case EvaluationStatus::non_constant: return "NON_CONSTANT";
    case EvaluationStatus::undecided: return "UNDECIDED";
    }
    return "?";
}

inline const char* to_string(EvaluationRule r) {
    switch (r) {
    case EvaluationRule::split_zero: return "SPLIT_ZERO";
    case EvaluationRule::unramified_zero: return "UNRAMIFIED_ZERO";
    case EvaluationRule::ramified_legendre: return "RAMIFIED_LEGENDRE";
    case EvaluationRule::real_positive_zero: return "REAL_POSITIVE_ZERO";
    case EvaluationRule::sampled: return "SAMPLED";
    }
    return "?";
}

inline EvaluationStatus parse_evaluation_status(const std::string& s) {
    for (auto v : {EvaluationStatus::constant, EvaluationStatus::non_constant, EvaluationStatus::undecided})
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown evaluation status: " + s);
}

inline EvaluationRule parse_evaluation_rule(const std::string& s) {
    for (auto v : {EvaluationRule::split_zero, EvaluationRule::unramified_zero, EvaluationRule::ramified_legendre,
                   EvaluationRule::real_positive_zero, EvaluationRule::sampled})
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown evaluation rule: " + s);
}

struct LocalEvaluation {
    EvaluationStatus status = EvaluationStatus::undecided;
    EvaluationRule rule = EvaluationRule::sampled;
    Half value = Half::zero;
    std::optional<EvaluationWitness> witness;
    std::string detail;
};

/// Inert p with A != B mod p, or 0 != A = B mod p with A/D a non-square mod p.
inline bool unramified_zero_applies(const SurfaceParams& s, const Integer& p) {
    if (square_class(s.D, Place{p}) != Splitting::inert) return false;
    if (mod(s.A - s.B, p) != 0) return true;
    if (p == 2 || mod(s.A, p) == 0) return false;
    Integer d = normalize_discriminant(s.D, p);
    return jacobi(mod(s.A * inverse_mod(mod(d, p), p), p), p) == -1;
}

/// Value forced at a ramified p by the congruence hypotheses: 0 iff A+1 is a square mod p.
inline Half ramified_legendre_value(const SurfaceParams& s, const Integer& p) {
    return jacobi(mod(s.A + 1, p), p) == 1 ? Half::zero : Half::half;
}

struct SampleSummary {
    int precision = 0;
    std::size_t points = 0;       // Hensel-valid classes seen
    std::size_t evaluated = 0;    // of those, with a determined quotient
    std::optional<EvaluationWitness> zero_witness;
    std::optional<EvaluationWitness> half_witness;
};

/// Evaluates at every Hensel-valid residue class mod p^k. Effective precision of a
/// class with margin e is k - e (the true point agrees to that many digits).
inline SampleSummary sample_evaluations(const SurfaceParams& s, const Integer& p, int k,
                                        std::uint64_t tuple_cap = SearchLimits{}.tuple_cap) {
    std::int64_t pp = detail::small_prime(p);
    Integer model = normalize_discriminant(s.D, p);
    ResidueScanner scanner(s, pp, k, model, tuple_cap);
    scanner.require_full_scan();
    SampleSummary out;
    out.precision = k;
    int allowed = (k - 1) / 2;
    // The quotients only involve t0, t1: cache by (t0, t1, effective precision).
    // -1 undetermined, 0 or 1 the value.
    std::unordered_map<std::uint64_t, int> seen;
    const auto m = static_cast<std::uint64_t>(scanner.modulus());
    scanner.for_each([&](const Point5& t) {
        int e = scanner.minor_valuation(t);
        if (e > allowed) return true;
        ++out.points;
        std::uint64_t key = (static_cast<std::uint64_t>(t[0]) * m + static_cast<std::uint64_t>(t[1])) *
                                static_cast<std::uint64_t>(k + 1) +
                            static_cast<std::uint64_t>(k - e);
        auto it = seen.find(key);
        if (it != seen.end()) {
            if (it->second >= 0) ++out.evaluated;
            return true;
        }
        LocalPoint lp;
        for (int i = 0; i < 5; ++i) lp.t[i] = t[i];
        lp.precision = k - e;
        try {
            auto w = evaluate_at_point(lp, s, p);
            w.point->precision = k;
            w.hensel_margin = e;
            ++out.evaluated;
            seen.emplace(key, w.value == Half::zero ? 0 : 1);
            auto& slot = w.value == Half::zero ? out.zero_witness : out.half_witness;
            if (!slot) slot = w;
        } catch (const precision_error&) {
            seen.emplace(key, -1);
        }
        return true;
    });
    return out;
}

/// SAMPLED mode: first precision 1, 3, 5, ... at which some class evaluates.
inline LocalEvaluation sampled_evaluation(const SurfaceParams& s, const Integer& p, const SearchLimits& limits = {}) {
    LocalEvaluation out;
    out.rule = EvaluationRule::sampled;
    for (int k = 1; k <= limits.precision_cap; k += 2) {
        SampleSummary sum;
        try {
            sum = sample_evaluations(s, p, k, limits.tuple_cap);
        } catch (const bounded_search_error& e) {
            out.detail = e.what();
            return out;
        }
        if (sum.zero_witness && sum.half_witness) {
            out.status = EvaluationStatus::non_constant;
            out.witness = sum.zero_witness;
            out.detail = "classes mod " + p.str() + "^" + std::to_string(k) + " evaluate to both 0 and 1/2";
            return out;
        }
        if (sum.evaluated > 0 && sum.evaluated == sum.points) {
            out.status = EvaluationStatus::constant;
            out.witness = sum.zero_witness ? sum.zero_witness : sum.half_witness;
            out.value = out.witness->value;
            out.detail = "all " + std::to_string(sum.points) + " Hensel-valid classes mod " + p.str() + "^" +
                         std::to_string(k) + " agree";
            return out;
        }
    }
    out.detail = "no unanimous sample up to precision " + std::to_string(limits.precision_cap);
    return out;
}

namespace detail {

inline RealPoint real_point_at(const SurfaceParams& s, const std::optional<Rational>& x) {
    // D < 0: t2 = 0 and T3^2, T4^2 absorb the nonnegative right-hand sides.
    Rational D(s.D);
    if (!x) return RealPoint{Rational(1), Rational(0), Rational(0), Rational(0), Rational(-1) / D};
    Rational t0 = *x;
    Rational prod = (t0 + Rational(s.A)) * (t0 + Rational(s.B));
    return RealPoint{t0, Rational(1), Rational(0), -t0 / D, -prod / D};
}

} // namespace detail

/// D < 0: real points have t0/t1 = x >= 0 with (x+A)(x+B) >= 0, or t1 = 0. The
/// symbol is locally constant away from 0, -A, -B, so sampling those breakpoints,
/// one point in each gap, one beyond, and x = infinity is exhaustive.
inline LocalEvaluation real_negative_evaluation(const SurfaceParams& s) {
    if (s.D >= 0) throw std::domain_error("real_negative_evaluation: D must be negative");
    std::set<Rational> marks{Rational(0)};
    for (const Integer* c : {&s.A, &s.B})
        if (-*c > 0) marks.insert(Rational(-*c));
    std::vector<Rational> sorted(marks.begin(), marks.end());
    std::vector<std::optional<Rational>> samples;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        samples.emplace_back(sorted[i]);
        if (i + 1 < sorted.size()) samples.emplace_back((sorted[i] + sorted[i + 1]) / 2);
    }
    samples.emplace_back(sorted.back() + 1);
    samples.emplace_back(std::nullopt);

    LocalEvaluation out;
    out.rule = EvaluationRule::sampled;
    std::optional<EvaluationWitness> zero, half;
    for (const auto& x : samples) {
        if (x && (*x + Rational(s.A)) * (*x + Rational(s.B)) < 0) continue;
        RealPoint pt = detail::real_point_at(s, x);
        if (!verify_real_point(s, pt)) continue;
        auto w = evaluate_at_real_point(pt, s);
        (w.value == Half::zero ? zero : half) = w;
    }
    if (zero && half) {
        out.status = EvaluationStatus::non_constant;
        out.witness = zero;
        out.detail = "real components evaluate to both 0 and 1/2";
    } else {
        out.status = EvaluationStatus::constant;
        out.witness = zero ? zero : half;
        out.value = out.witness->value;
        out.detail = "exact: every sign interval sampled";
    }
    return out;
}

namespace detail {

/// A point evaluation consistent with the claimed constant, if one can be produced.
inline std::optional<EvaluationWitness> point_evaluation(const SurfaceParams& s, const Place& v,
                                                         const SolvabilityWitness* sw, const SearchLimits& limits) {
    if (v.is_real()) {
        RealPoint pt = sw && sw->real_point ? *sw->real_point : *solvable_at_real(s).real_point;
        return evaluate_at_real_point(pt, s);
    }
    if (sw && sw->point) {
        LocalPoint lp = *sw->point;
        lp.precision -= sw->hensel_margin;
        try {
            auto w = evaluate_at_point(lp, s, v.prime);
            w.point = sw->point;
            w.hensel_margin = sw->hensel_margin;
            return w;
        } catch (const precision_error&) {
        }
    }
    for (int k = 1; k <= limits.precision_cap; k += 2) {
        try {
            auto sum = sample_evaluations(s, v.prime, k, limits.tuple_cap);
            if (sum.zero_witness) return sum.zero_witness;
            if (sum.half_witness) return sum.half_witness;
        } catch (const bounded_search_error&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

inline LocalEvaluation with_rule(EvaluationRule rule, Half value, const SurfaceParams& s, const Place& v,
                                 const SolvabilityWitness* sw, const SearchLimits& limits) {
    LocalEvaluation out;
    out.status = EvaluationStatus::constant;
    out.rule = rule;
    out.value = value;
    out.witness = point_evaluation(s, v, sw, limits);
    if (out.witness && out.witness->value != value) {
        // A rule contradicted by an actual point is a bug, not a verdict.
        out.status = EvaluationStatus::undecided;
        out.detail = std::string("point evaluation contradicts ") + to_string(rule);
    }
    return out;
}

} // namespace detail

/// Rule dispatch; falls back to SAMPLED where no rule applies.
inline LocalEvaluation local_evaluation(const SurfaceParams& s, const Place& v, const SolvabilityWitness* sw = nullptr,
                                        const SearchLimits& limits = {}) {
    if (v.is_real()) {
        if (s.D > 0) return detail::with_rule(EvaluationRule::real_positive_zero, Half::zero, s, v, sw, limits);
        return real_negative_evaluation(s);
    }
    const Integer& p = v.prime;
    Splitting split = square_class(s.D, v);
    if (split == Splitting::split) return detail::with_rule(EvaluationRule::split_zero, Half::zero, s, v, sw, limits);
    if (unramified_zero_applies(s, p))
        return detail::with_rule(EvaluationRule::unramified_zero, Half::zero, s, v, sw, limits);
    if (split == Splitting::ramified && ramified_congruences_hold(s, p))
        return detail::with_rule(EvaluationRule::ramified_legendre, ramified_legendre_value(s, p), s, v, sw, limits);
    try {
        return sampled_evaluation(s, p, limits);
    } catch (const bounded_search_error& e) {
        LocalEvaluation out;
        out.detail = e.what();
        return out;
    }
}

// ---------------------------------------------------------------------------
// Global assembly

enum class Verdict { counterexample, no_obstruction_from_alpha, not_locally_solvable, undecided, singular };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::counterexample: return "COUNTEREXAMPLE";
    case Verdict::no_obstruction_from_alpha: return "NO_OBSTRUCTION_FROM_ALPHA";
    case Verdict::not_locally_solvable: return "NOT_LOCALLY_SOLVABLE";
    case Verdict::undecided: return "UNDECIDED";
    case Verdict::singular: return "SINGULAR";
    }
    return "?";
}

inline Verdict parse_verdict(const std::string& s) {
    for (auto v : {Verdict::counterexample, Verdict::no_obstruction_from_alpha, Verdict::not_locally_solvable,
                   Verdict::undecided, Verdict::singular})
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown verdict: " + s);
}

struct LocalCertificate {
    Place place;
    Splitting splitting = Splitting::split;
    LocalSolvability solvability;
    LocalEvaluation evaluation;
};

struct GlobalCertificate {
    SurfaceParams surface;
    bool nonsingular = false;
    std::vector<LocalCertificate> locals;
    Half sum = Half::zero;
    Verdict verdict = Verdict::undecided;
    bool reciprocity_check = false;
    std::vector<std::string> blanket_rules;
};

/// Places with no blanket rule: infinity, 2, odd-valuation primes of D, and primes
/// dividing A - B that are not split.
inline std::vector<Place> evaluation_places(const SurfaceParams& s) {
    std::set<Integer> finite{2};
    for (const auto& p : odd_valuation_primes(s.D)) finite.insert(p);
    if (s.A != s.B)
        for (const auto& p : factor(s.A - s.B).primes())
            if (square_class(s.D, Place{p}) != Splitting::split) finite.insert(p);
    std::vector<Place> out{Place::real()};
    for (const auto& p : finite) out.push_back(Place{p});
    return out;
}

inline std::vector<std::string> blanket_rule_text(const SurfaceParams& s) {
    std::vector<std::string> out{
        std::string("solvability: ") + kUnramifiedBlanket,
        "evaluation: split primes contribute 0",
        "evaluation: remaining primes are unramified with A != B mod p and contribute 0",
    };
    if (s.D > 0) out.push_back("evaluation: D > 0 so the real place contributes 0");
    return out;
}

inline Verdict decide_verdict(const GlobalCertificate& c) {
    if (!c.nonsingular) return Verdict::singular;
    bool undecided = false;
    for (const auto& l : c.locals) {
        if (l.solvability.status == LocalStatus::unsolvable) return Verdict::not_locally_solvable;
        if (l.solvability.status == LocalStatus::undecided) undecided = true;
        if (l.evaluation.status != EvaluationStatus::constant) undecided = true;
        if (l.evaluation.rule == EvaluationRule::sampled && !l.place.is_real()) undecided = true;
    }
    if (undecided) return Verdict::undecided;
    return c.sum == Half::half ? Verdict::counterexample : Verdict::no_obstruction_from_alpha;
}

/// Recomputes every stored symbol and checks that an odd number of places carry -1
/// and that the sum is 1/2.
inline bool reciprocity_selfcheck(const GlobalCertificate& c) {
    if (c.verdict != Verdict::counterexample) return false;
    Half total = Half::zero;
    int minus = 0;
    for (const auto& l : c.locals) {
        const auto& ev = l.evaluation;
        if (ev.status != EvaluationStatus::constant) return false;
        total = total + ev.value;
        if (!ev.witness) {
            if (ev.value == Half::half) return false;
            continue;
        }
        const auto& w = *ev.witness;
        if (!(w.place == l.place) || w.q == 0) return false;
        int symbol = hilbert_symbol(w.q, Rational(c.surface.D), l.place);
        if (symbol != w.symbol || from_symbol(symbol) != w.value || w.value != ev.value) return false;
        if (symbol == -1) ++minus;
    }
    return total == Half::half && total == c.sum && minus % 2 == 1;
}

inline GlobalCertificate global_obstruction(const SurfaceParams& s, const SearchLimits& limits = {}) {
    GlobalCertificate c;
    c.surface = s;
    c.nonsingular = is_nonsingular(s);
    if (!c.nonsingular) {
        c.verdict = Verdict::singular;
        return c;
    }
    c.blanket_rules = blanket_rule_text(s);
    for (const auto& v : evaluation_places(s)) {
        LocalCertificate l;
        l.place = v;
        l.splitting = square_class(s.D, v);
        l.solvability = solvable_at(s, v, limits);
        c.locals.push_back(std::move(l));
    }
    // Evaluating is pointless once some place has no local points.
    bool any_unsolvable = false;
    for (const auto& l : c.locals) any_unsolvable = any_unsolvable || l.solvability.status == LocalStatus::unsolvable;
    for (auto& l : c.locals) {
        if (l.solvability.status == LocalStatus::solvable && !any_unsolvable) {
            const SolvabilityWitness* sw = l.solvability.witness ? &*l.solvability.witness : nullptr;
            l.evaluation = local_evaluation(s, l.place, sw, limits);
        } else if (l.solvability.status == LocalStatus::solvable) {
            l.evaluation.detail = "not evaluated: another place has no local points";
        } else {
            l.evaluation.detail = "not evaluated: place not known to be solvable";
        }
        if (l.evaluation.status == EvaluationStatus::constant) c.sum = c.sum + l.evaluation.value;
    }
    c.verdict = decide_verdict(c);
    c.reciprocity_check = c.verdict == Verdict::counterexample && reciprocity_selfcheck(c);
    return c;
}

// ---------------------------------------------------------------------------
// Bounded search for rational points

using RationalPoint = std::array<Integer, 5>;

namespace detail {

inline unsigned __int128 isqrt_u128(unsigned __int128 n) {
    if (n < 2) return n;
    int bits = 0;
    for (unsigned __int128 m = n; m; m >>= 1) ++bits;
    unsigned __int128 x = static_cast<unsigned __int128>(1) << ((bits + 1) / 2);
    while (true) {
        unsigned __int128 y = (x + n / x) / 2;
        if (y >= x) return x;
        x = y;
    }
}

/// Nonnegative r with r*r == n and r <= bound, if any.
inline std::optional<std::int64_t> bounded_root(__int128 n, std::int64_t bound) {
    if (n < 0) return std::nullopt;
    auto r = isqrt_u128(static_cast<unsigned __int128>(n));
    if (r * r != static_cast<unsigned __int128>(n) || r > static_cast<unsigned __int128>(bound)) return std::nullopt;
    return static_cast<std::int64_t>(r);
}

} // namespace detail

/// Exhaustive scan of primitive integer points with all |t_i| <= height_bound.
inline std::optional<RationalPoint> rational_point_search(const SurfaceParams& s, std::int64_t height_bound) {
    if (height_bound < 1) throw std::domain_error("rational_point_search: height bound must be positive");
    if (height_bound > 100'000 || !fits_int64(s.D) || !fits_int64(s.A) || !fits_int64(s.B) ||
        abs(s.D) > Integer(1) << 40 || abs(s.A) > Integer(1) << 40 || abs(s.B) > Integer(1) << 40)
        throw std::domain_error("rational_point_search: parameters too large for the scan");
    const __int128 D = static_cast<std::int64_t>(s.D), A = static_cast<std::int64_t>(s.A),
                   B = static_cast<std::int64_t>(s.B);
    const std::int64_t H = height_bound;
    for (std::int64_t t0 = -H; t0 <= H; ++t0) {
        for (std::int64_t t1 = -H; t1 <= H; ++t1) {
            __int128 c1 = static_cast<__int128>(t0) * t1;
            __int128 c2 = (t0 + A * t1) * (t0 + B * t1);
            for (std::int64_t t2 = 0; t2 <= H; ++t2) {
                __int128 sq = static_cast<__int128>(t2) * t2;
                __int128 r3 = sq - c1, r4 = sq - c2;
                if (r3 % D != 0 || r4 % D != 0) continue;
                auto t3 = detail::bounded_root(r3 / D, H);
                if (!t3) continue;
                auto t4 = detail::bounded_root(r4 / D, H);
                if (!t4) continue;
                if (t0 == 0 && t1 == 0 && t2 == 0 && *t3 == 0 && *t4 == 0) continue;
                Integer g = 0;
                for (std::int64_t x : {t0, t1, t2, *t3, *t4}) g = gcd(g, Integer(x));
                if (g != 1) continue;
                return RationalPoint{Integer(t0), Integer(t1), Integer(t2), Integer(*t3), Integer(*t4)};
            }
        }
    }
    return std::nullopt;
}

} // namespace dp4
