#pragma once

// Building discriminants and parameters (A, B) in prescribed residue classes whose
// surfaces carry a nonzero obstruction sum.

#include "dp4/arith.hpp"
#include "dp4/brauer.hpp"
#include "dp4/moduli.hpp"
#include "dp4/surface.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace dp4 {

/// a != 0, -1, -2 and a^2 + a + 1 != 0 mod p.
inline bool admissible_residue(std::int64_t a, std::int64_t p) {
    a = mod(a, p);
    return a != 0 && a != p - 1 && a != mod(-2, p) && mod(a * a + a + 1, p) != 0;
}

inline bool is_nonzero_square(std::int64_t a, std::int64_t p) { return legendre_unchecked(mod(a, p), p) == 1; }

/// Least admissible nonzero square a mod p with prescribed square classes of a+1, a+2.
inline std::optional<std::int64_t> find_pattern_element(std::int64_t p, bool plus_one_square, bool plus_two_square) {
    if (p <= 2 || !is_prime(p)) throw std::domain_error("find_pattern_element: p must be an odd prime");
    for (std::int64_t a = 1; a < p; ++a) {
        if (!admissible_residue(a, p) || !is_nonzero_square(a, p)) continue;
        if (is_nonzero_square(a + 1, p) == plus_one_square && is_nonzero_square(a + 2, p) == plus_two_square) return a;
    }
    return std::nullopt;
}

/// Least admissible nonzero square mod p, any pattern.
inline std::optional<std::int64_t> smallest_admissible_square(std::int64_t p) {
    for (std::int64_t a = 1; a < p; ++a)
        if (admissible_residue(a, p) && is_nonzero_square(a, p)) return a;
    return std::nullopt;
}

/// Least D > 0 with D = 1 mod 8, v_p(D) = 1 for p in ramify, and no prime of avoid dividing D.
inline Integer build_D(const std::vector<Integer>& ramify, const std::vector<Integer>& avoid,
                       std::uint64_t cap = kDefaultDirichletCap) {
    if (ramify.empty()) throw std::domain_error("build_D: need at least one prime to ramify");
    std::set<Integer> seen;
    for (const auto& p : ramify) {
        if (p == 2 || !is_prime(p)) throw std::domain_error("build_D: " + p.str() + " is not an odd prime");
        if (!seen.insert(p).second) throw std::domain_error("build_D: " + p.str() + " listed twice");
    }
    for (const auto& q : avoid) {
        if (!is_prime(q)) throw std::domain_error("build_D: " + q.str() + " is not prime");
        if (q == 2 || seen.contains(q)) throw std::domain_error("build_D: cannot both ramify and avoid " + q.str());
    }
    Integer P = 1;
    for (const auto& p : ramify) P *= p;
    // D = P m with m = P^{-1} mod 8, m prime to every listed prime.
    Integer m = inverse_mod(mod(P, Integer(8)), Integer(8));
    for (std::uint64_t i = 0; i < cap; ++i, m += 8) {
        bool ok = true;
        for (const auto& p : ramify)
            if (m % p == 0) ok = false;
        for (const auto& q : avoid)
            if (m % q == 0) ok = false;
        if (ok) return P * m;
    }
    throw bounded_search_error("build_D: no admissible multiplier within cap");
}

// ---------------------------------------------------------------------------
// Hypothesis checker

struct ConditionItem {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct ConditionReport {
    std::vector<ConditionItem> items;
    std::vector<Integer> ramified;
    int nonsquare_count = 0; // ramified p with A+1 a non-square mod p

    bool pass() const {
        return std::all_of(items.begin(), items.end(), [](const ConditionItem& i) { return i.pass; });
    }
    const ConditionItem* find(const std::string& id) const {
        for (const auto& i : items)
            if (i.id == id) return &i;
        return nullptr;
    }
};

inline ConditionReport verify_conditions(const SurfaceParams& s) {
    ConditionReport r;
    const auto& [D, A, B] = s;
    auto add = [&](std::string id, bool pass, std::string detail) {
        r.items.push_back(ConditionItem{std::move(id), pass, std::move(detail)});
    };
    r.ramified = odd_valuation_primes(D);
    bool two_ramified = D != 0 && square_class(D, Place{2}) == Splitting::ramified;
    add("a.i", !r.ramified.empty() || two_ramified, std::to_string(r.ramified.size()) + " odd ramified primes");
    add("a.ii", !two_ramified, two_ramified ? "2 ramifies" : "2 unramified");
    add("a.iii", D > 0, D > 0 ? "D > 0" : "D <= 0");
    if (!two_ramified && D != 0 && square_class(D, Place{2}) == Splitting::inert) {
        bool ok = two_adic_congruence_holds(s);
        add("b", ok, ok ? "2 inert; v2(B-1) = f >= 1, v2(A) odd and >= 2f+3" : "2 inert; 2-adic congruences fail");
    } else {
        add("b", true, "2 not inert");
    }
    bool ci = true, cii = true;
    std::string di, dii;
    for (const auto& p : r.ramified) {
        Integer a = mod(A, p);
        bool sq = jacobi(a, p) == 1;
        bool adm = a != 0 && a != p - 1 && mod(a * a + a + 1, p) != 0;
        if (!sq || !adm) {
            ci = false;
            di += "p=" + p.str() + ": A=" + a.str() + (sq ? " excluded value; " : " non-square; ");
        }
        if (a + 1 != p && a + 1 != 0) {
            Integer want = mod(-a * inverse_mod(mod(a + 1, p), p), p);
            if (mod(B, p) != want) {
                cii = false;
                dii += "p=" + p.str() + ": B should be " + want.str() + "; ";
            }
            if (jacobi(mod(a + 1, p), p) == -1) ++r.nonsquare_count;
        } else {
            cii = false;
            dii += "p=" + p.str() + ": A+1 = 0; ";
        }
    }
    add("c.i", ci, ci ? "A is an admissible square at every ramified prime" : di);
    add("c.ii", cii, cii ? "B = -A/(A+1) at every ramified prime" : dii);
    add("c.iii", r.nonsquare_count % 2 == 1, std::to_string(r.nonsquare_count) + " ramified primes with A+1 non-square");
    bool d = A != B;
    std::string dd = A == B ? "A = B" : "A-B = " + Integer(A - B).str();
    if (d && abs(A - B) != 1) {
        for (const auto& q : factor(A - B).primes()) {
            if (D == 0 || square_class(D, Place{q}) != Splitting::split) {
                d = false;
                dd += "; " + q.str() + " not split";
            }
        }
    }
    add("d", d, dd);
    add("nonsingular", is_nonsingular(s), is_nonsingular(s) ? "nonsingular" : "singular");
    return r;
}

// ---------------------------------------------------------------------------
// Construction of (A, B)

struct BuildOutcome {
    std::optional<SurfaceParams> surface;
    std::map<Integer, std::int64_t> residues; // ramified p -> A mod p
    Integer designated;                       // prime carrying the parity choice
    Integer difference;                       // A - B, prime up to sign
    std::string diagnostics;

    explicit operator bool() const { return surface.has_value(); }
};

/// Checks the hypotheses on D and l; throws std::domain_error on violation.
inline void check_construction_input(const Integer& D, const Integer& l, const Integer& a, const Integer& b) {
    if (D <= 0) throw std::domain_error("build_AB: D must be positive");
    if (is_square(D)) throw std::domain_error("build_AB: D must not be a square");
    if (square_class(D, Place{2}) != Splitting::split) throw std::domain_error("build_AB: 2 must split in Q(sqrt D)");
    if (square_class(D, Place{3}) == Splitting::ramified) throw std::domain_error("build_AB: 3 must not ramify");
    if (!is_prime(l)) throw std::domain_error("build_AB: l must be prime");
    if (square_class(D, Place{l}) == Splitting::ramified) throw std::domain_error("build_AB: l ramifies in Q(sqrt D)");
    if (mod(a - b, l) == 0) throw std::domain_error("build_AB: a and b must differ mod l");
}

/// The k-th admissible prime difference (k = 0 is the least) for the given B.
inline BuildOutcome build_AB(const Integer& D, const Integer& l, const Integer& a, const Integer& b,
                             std::uint64_t dirichlet_cap = kDefaultDirichletCap, int skip = 0) {
    check_construction_input(D, l, a, b);
    BuildOutcome out;
    auto ramified = odd_valuation_primes(D);
    if (ramified.empty()) throw std::domain_error("build_AB: no ramified odd prime");
    for (const auto& p : ramified)
        if (!fits_int64(p)) throw std::domain_error("build_AB: ramified prime " + p.str() + " too large");

    // Designate the largest ramified prime above 25, else the largest one.
    Integer M = ramified.back();
    for (const auto& p : ramified)
        if (p > 25) M = p;
    out.designated = M;

    int odd1 = 0, odd2 = 0;
    for (const auto& p : ramified) {
        if (p == M) continue;
        auto pp = static_cast<std::int64_t>(p);
        auto ai = smallest_admissible_square(pp);
        if (!ai) {
            out.diagnostics = "no admissible square mod " + p.str();
            return out;
        }
        out.residues[p] = *ai;
        odd1 += !is_nonzero_square(*ai + 1, pp);
        odd2 += !is_nonzero_square(*ai + 2, pp);
    }
    auto pm = static_cast<std::int64_t>(M);
    auto am = find_pattern_element(pm, odd1 % 2 == 1, odd2 % 2 == 1);
    if (!am) {
        out.diagnostics = "no admissible pattern element mod " + M.str();
        return out;
    }
    out.residues[M] = *am;

    // B by CRT; A - B = y in the class (a - b mod l, a_i(a_i+2)/(a_i+1) mod p_i).
    std::vector<std::pair<Integer, Integer>> bcong{{mod(b, l), l}}, ycong{{mod(a - b, l), l}};
    for (const auto& [p, ai] : out.residues) {
        Integer inv = inverse_mod(mod(Integer(ai + 1), p), p);
        Integer bi = mod(-Integer(ai) * inv, p);
        bcong.emplace_back(bi, p);
        ycong.emplace_back(mod(Integer(ai) - bi, p), p);
    }
    Integer B = crt_solve(bcong);
    Integer modulus = l;
    for (const auto& p : ramified) modulus *= p;
    Integer r = crt_solve(ycong);

    // Candidates +q (q = r) and -q (q = -r), interleaved by size.
    std::set<Integer> avoid{2};
    std::vector<Integer> found;
    Integer start_pos = 3, start_neg = 3;
    std::uint64_t budget = dirichlet_cap;
    try {
        while (static_cast<int>(found.size()) <= skip + 64) {
            Integer qp = dirichlet_prime(r, modulus, avoid, start_pos, budget);
            Integer qn = dirichlet_prime(mod(-r, modulus), modulus, avoid, start_neg, budget);
            Integer y;
            if (qp <= qn) {
                y = qp;
                start_pos = qp + 1;
            } else {
                y = -qn;
                start_neg = qn + 1;
            }
            if (D % y == 0) continue;
            SurfaceParams s{D, B + y, B};
            if (!is_nonsingular(s)) continue;
            if (skip-- > 0) continue;
            out.surface = s;
            out.difference = y;
            return out;
        }
    } catch (const bounded_search_error& e) {
        out.diagnostics = e.what();
        return out;
    }
    out.diagnostics = "no usable prime difference";
    return out;
}

// ---------------------------------------------------------------------------
// Search over residue classes

struct SearchResult {
    std::vector<SurfaceParams> surfaces;
    std::vector<std::string> keys; // canonical moduli keys, aligned with surfaces
    std::vector<GlobalCertificate> certificates;
    std::size_t candidates = 0;
    std::vector<std::string> diagnostics;
    bool complete = false;
};

/// Varies (l, a, b) over small unramified primes and residue pairs, in an order
/// shuffled by seed, and keeps certified surfaces with new moduli points.
inline SearchResult search_counterexamples(const Integer& D, std::size_t count, std::uint64_t seed,
                                           const SearchLimits& limits = {}, std::size_t budget = 2000,
                                           const std::set<std::string>& known_keys = {}) {
    if (D <= 0 || is_square(D)) throw std::domain_error("search_counterexamples: D must be a positive non-square");
    check_construction_input(D, 2, 0, 1);
    struct Job {
        Integer l, a, b;
    };
    std::vector<Job> jobs;
    for (std::int64_t l = 2; jobs.size() < budget && l < 1000; ++l) {
        if (!is_prime(l) || square_class(D, Place{l}) == Splitting::ramified) continue;
        for (std::int64_t a = 0; a < l; ++a)
            for (std::int64_t b = 0; b < l; ++b)
                if (a != b) jobs.push_back(Job{l, a, b});
    }
    if (jobs.size() > budget) jobs.resize(budget);
    std::mt19937_64 rng(seed);
    std::shuffle(jobs.begin(), jobs.end(), rng);

    SearchResult res;
    std::set<std::string> keys = known_keys;
    std::vector<InvariantTriple> points;
    for (const auto& job : jobs) {
        if (res.surfaces.size() >= count) break;
        ++res.candidates;
        BuildOutcome built = build_AB(D, job.l, job.a, job.b, limits.dirichlet_cap);
        if (!built) {
            res.diagnostics.push_back("l=" + job.l.str() + " a=" + job.a.str() + " b=" + job.b.str() + ": " +
                                      built.diagnostics);
            continue;
        }
        const SurfaceParams& s = *built.surface;
        InvariantTriple t = moduli_point(s);
        std::string key = moduli_key(t);
        if (keys.contains(key)) continue;
        bool seen = false;
        for (const auto& q : points)
            if (same_weighted_point(t, q)) seen = true;
        if (seen) continue;
        GlobalCertificate cert = global_obstruction(s, limits);
        if (cert.verdict != Verdict::counterexample || !cert.reciprocity_check) {
            res.diagnostics.push_back(s.to_string() + ": verdict " + to_string(cert.verdict));
            continue;
        }
        keys.insert(key);
        points.push_back(t);
        res.surfaces.push_back(s);
        res.keys.push_back(key);
        res.certificates.push_back(std::move(cert));
    }
    res.complete = res.surfaces.size() >= count;
    if (!res.complete) res.diagnostics.push_back("candidate budget exhausted");
    return res;
}

} // namespace dp4
