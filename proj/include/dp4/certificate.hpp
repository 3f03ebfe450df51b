#pragma once

// JSON certificates (schema dp4-cert/1), an offline verifier, and the results ledger.

#include "dp4/brauer.hpp"
#include "dp4/moduli.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace dp4 {

using Json = nlohmann::json; // std::map objects: keys come out sorted

inline constexpr const char* kSchemaVersion = "dp4-cert/1";
inline constexpr const char* kToolVersion = "0.1.0";

/// UTC time, or DP4_TIMESTAMP when set (for reproducible output).
inline std::string current_timestamp() {
    if (const char* fixed = std::getenv("DP4_TIMESTAMP")) return fixed;
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline std::string str(const Json& j, const char* key);

inline Json real_point_json(const RealPoint& r) {
    return Json{{"t0", to_string(r.t0)},
                {"t1", to_string(r.t1)},
                {"t2", to_string(r.t2)},
                {"t3_squared", to_string(r.t3_squared)},
                {"t4_squared", to_string(r.t4_squared)}};
}

inline RealPoint real_point_from_json(const Json& r) {
    return RealPoint{parse_rational(str(r, "t0")), parse_rational(str(r, "t1")), parse_rational(str(r, "t2")),
                     parse_rational(str(r, "t3_squared")), parse_rational(str(r, "t4_squared"))};
}

inline LocalPoint point_from_json(const Json& pt, const Json& precision) {
    if (!pt.is_array() || pt.size() != 5) throw std::invalid_argument("certificate: point must have 5 entries");
    if (!precision.is_string()) throw std::invalid_argument("certificate: precision must be a string");
    LocalPoint lp;
    for (std::size_t i = 0; i < 5; ++i) lp.t[i] = parse_integer(pt.at(i).get<std::string>());
    lp.precision = static_cast<int>(parse_integer(precision.get<std::string>()));
    return lp;
}

inline Json solvability_json(const LocalSolvability& l) {
    Json j;
    j["status"] = to_string(l.status);
    j["detail"] = l.detail;
    if (!l.witness) {
        j["rule"] = nullptr;
        return j;
    }
    const auto& w = *l.witness;
    j["rule"] = to_string(w.rule);
    j["model_d"] = w.model_D.str();
    j["hensel_margin"] = std::to_string(w.hensel_margin);
    if (w.point) {
        Json pt = Json::array();
        for (const auto& x : w.point->t) pt.push_back(x.str());
        j["point"] = pt;
        j["precision"] = std::to_string(w.point->precision);
    } else {
        j["point"] = nullptr;
        j["precision"] = nullptr;
    }
    if (w.real_point) {
        j["real_point"] = real_point_json(*w.real_point);
    }
    return j;
}

inline Json evaluation_json(const LocalEvaluation& e) {
    Json j;
    j["status"] = to_string(e.status);
    j["rule"] = to_string(e.rule);
    j["e"] = e.status == EvaluationStatus::constant ? Json(to_string(e.value)) : Json(nullptr);
    j["detail"] = e.detail;
    if (e.witness) {
        j["q"] = to_string(e.witness->q);
        j["quotient"] = to_string(e.witness->quotient);
        j["symbol"] = std::to_string(e.witness->symbol);
        const auto& w = *e.witness;
        if (w.point) {
            Json pt = Json::array();
            for (const auto& x : w.point->t) pt.push_back(x.str());
            j["at"] = Json{{"point", pt},
                           {"precision", std::to_string(w.point->precision)},
                           {"hensel_margin", std::to_string(w.hensel_margin)}};
        } else if (w.real_point) {
            j["at"] = real_point_json(*w.real_point);
        } else {
            j["at"] = nullptr;
        }
    } else {
        j["q"] = nullptr;
        j["quotient"] = nullptr;
        j["symbol"] = nullptr;
    }
    return j;
}

inline std::string str(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw std::invalid_argument(std::string("certificate: missing string field '") + key + "'");
    return j.at(key).get<std::string>();
}

inline LocalSolvability solvability_from_json(const Json& j, const Place& place) {
    LocalSolvability l;
    l.place = place;
    std::string status = str(j, "status");
    if (status == "SOLVABLE") l.status = LocalStatus::solvable;
    else if (status == "UNSOLVABLE") l.status = LocalStatus::unsolvable;
    else if (status == "UNDECIDED") l.status = LocalStatus::undecided;
    else throw std::invalid_argument("certificate: bad solvability status " + status);
    if (j.contains("detail") && j.at("detail").is_string()) l.detail = j.at("detail").get<std::string>();
    if (!j.contains("rule") || j.at("rule").is_null()) return l;
    SolvabilityWitness w;
    w.place = place;
    w.rule = parse_solvability_rule(str(j, "rule"));
    w.model_D = parse_integer(str(j, "model_d"));
    w.hensel_margin = static_cast<int>(parse_integer(str(j, "hensel_margin")));
    if (j.contains("point") && !j.at("point").is_null()) w.point = point_from_json(j.at("point"), j.at("precision"));
    if (j.contains("real_point")) w.real_point = real_point_from_json(j.at("real_point"));
    l.witness = w;
    return l;
}

inline LocalEvaluation evaluation_from_json(const Json& j, const Place& place) {
    LocalEvaluation e;
    e.status = parse_evaluation_status(str(j, "status"));
    e.rule = parse_evaluation_rule(str(j, "rule"));
    if (e.status == EvaluationStatus::constant) e.value = parse_half(str(j, "e"));
    if (j.contains("detail") && j.at("detail").is_string()) e.detail = j.at("detail").get<std::string>();
    if (j.contains("q") && !j.at("q").is_null()) {
        EvaluationWitness w;
        w.place = place;
        w.q = parse_rational(str(j, "q"));
        w.quotient = parse_quotient(str(j, "quotient"));
        w.symbol = static_cast<int>(parse_integer(str(j, "symbol")));
        w.value = from_symbol(w.symbol);
        if (j.contains("at") && !j.at("at").is_null()) {
            const auto& at = j.at("at");
            if (at.contains("point")) {
                w.point = point_from_json(at.at("point"), at.at("precision"));
                w.hensel_margin = static_cast<int>(parse_integer(str(at, "hensel_margin")));
            } else {
                w.real_point = real_point_from_json(at);
            }
        }
        e.witness = w;
    }
    return e;
}

} // namespace detail

inline Json certificate_to_json(const GlobalCertificate& c) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["surface"] = c.surface.to_string();
    j["nonsingular"] = c.nonsingular;
    Json locals = Json::array();
    for (const auto& l : c.locals) {
        locals.push_back(Json{{"place", l.place.to_string()},
                              {"splitting", to_string(l.splitting)},
                              {"solvability", detail::solvability_json(l.solvability)},
                              {"evaluation", detail::evaluation_json(l.evaluation)}});
    }
    j["locals"] = locals;
    j["blanket_rules"] = c.blanket_rules;
    j["sum"] = to_string(c.sum);
    j["verdict"] = to_string(c.verdict);
    j["reciprocity_check"] = c.reciprocity_check;
    j["moduli"] = c.nonsingular ? Json(moduli_key(moduli_point(c.surface))) : Json(nullptr);
    j["tool_version"] = kToolVersion;
    j["timestamp"] = current_timestamp();
    return j;
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

inline GlobalCertificate certificate_from_json(const Json& j) {
    if (detail::str(j, "schema_version") != kSchemaVersion)
        throw std::invalid_argument("certificate: unsupported schema " + detail::str(j, "schema_version"));
    GlobalCertificate c;
    c.surface = SurfaceParams::parse(detail::str(j, "surface"));
    c.nonsingular = j.at("nonsingular").get<bool>();
    for (const auto& lj : j.at("locals")) {
        LocalCertificate l;
        l.place = parse_place(detail::str(lj, "place"));
        l.splitting = parse_splitting(detail::str(lj, "splitting"));
        l.solvability = detail::solvability_from_json(lj.at("solvability"), l.place);
        l.evaluation = detail::evaluation_from_json(lj.at("evaluation"), l.place);
        c.locals.push_back(std::move(l));
    }
    if (j.contains("blanket_rules"))
        for (const auto& r : j.at("blanket_rules")) c.blanket_rules.push_back(r.get<std::string>());
    c.sum = parse_half(detail::str(j, "sum"));
    c.verdict = parse_verdict(detail::str(j, "verdict"));
    c.reciprocity_check = j.at("reciprocity_check").get<bool>();
    return c;
}

// ---------------------------------------------------------------------------
// Offline verification: re-derives every claim from the stored data, no searches.

struct CertificateCheck {
    bool ok = true;
    Verdict verdict = Verdict::undecided; // as re-derived
    std::vector<std::string> problems;
    std::vector<std::string> notes;

    void fail(std::string why) {
        ok = false;
        problems.push_back(std::move(why));
    }
};

/// The witness point lies on S to its stated precision (Hensel margin checked) and
/// re-evaluating there gives the stored quotient and q.
inline bool evaluation_point_verifies(const SurfaceParams& s, const Place& place, const EvaluationWitness& w) {
    try {
        EvaluationWitness again;
        if (place.is_real()) {
            if (!w.real_point || !verify_real_point(s, *w.real_point)) return false;
            again = evaluate_at_real_point(*w.real_point, s);
        } else {
            if (!w.point) return false;
            const Integer& p = place.prime;
            SolvabilityWitness sw;
            sw.place = place;
            sw.point = w.point;
            sw.hensel_margin = w.hensel_margin;
            sw.model_D = normalize_discriminant(s.D, p);
            // A split-place point has exact T0 = 1, T1 = 0, so any precision is honest for q.
            if (!(w.hensel_margin == 0 && verify_split_witness(s, sw))) {
                if (!verify_hensel_witness(s, sw)) return false;
                Integer pk = pow(p, static_cast<unsigned>(w.point->precision));
                if (first_equation<Integer>(sw.model_D, w.point->t) % pk != 0 ||
                    second_equation<Integer>(sw.model_D, s.A, s.B, w.point->t) % pk != 0)
                    return false;
            }
            LocalPoint lp = *w.point;
            lp.precision -= w.hensel_margin;
            again = evaluate_at_point(lp, s, p);
        }
        return again.quotient == w.quotient && again.q == w.q;
    } catch (const std::exception&) {
        return false;
    }
}

inline CertificateCheck check_certificate(const Json& doc) {
    CertificateCheck out;
    GlobalCertificate c;
    try {
        c = certificate_from_json(doc);
    } catch (const std::exception& e) {
        out.fail(std::string("malformed: ") + e.what());
        return out;
    }
    const SurfaceParams& s = c.surface;
    GlobalCertificate r; // rebuilt from verified pieces only
    r.surface = s;
    r.nonsingular = is_nonsingular(s);
    if (r.nonsingular != c.nonsingular) out.fail("nonsingular flag is wrong");
    if (!r.nonsingular) {
        r.verdict = Verdict::singular;
    } else {
        std::vector<Place> expected = evaluation_places(s);
        std::vector<Place> got;
        for (const auto& l : c.locals) got.push_back(l.place);
        if (got != expected) out.fail("place list differs from the required evaluation places");
        for (const auto& l : c.locals) {
            std::string at = "place " + l.place.to_string() + ": ";
            LocalCertificate v;
            v.place = l.place;
            v.splitting = square_class(s.D, l.place);
            if (v.splitting != l.splitting) out.fail(at + "splitting type is wrong");

            v.solvability = l.solvability;
            if (l.solvability.status == LocalStatus::solvable) {
                if (!l.solvability.witness || !(l.solvability.witness->place == l.place) ||
                    !verify_witness(s, *l.solvability.witness)) {
                    out.fail(at + "solvability witness does not verify");
                    v.solvability.status = LocalStatus::undecided;
                }
            } else if (l.solvability.status == LocalStatus::unsolvable) {
                out.notes.push_back(at + "claimed insolubility is not re-derived offline");
            }

            const auto& ev = l.evaluation;
            v.evaluation = ev;
            bool good = true;
            if (ev.status == EvaluationStatus::constant) {
                const Integer& p = l.place.prime;
                switch (ev.rule) {
                case EvaluationRule::split_zero:
                    good = !l.place.is_real() && v.splitting == Splitting::split && ev.value == Half::zero;
                    break;
                case EvaluationRule::unramified_zero:
                    good = !l.place.is_real() && unramified_zero_applies(s, p) && ev.value == Half::zero;
                    break;
                case EvaluationRule::ramified_legendre:
                    good = !l.place.is_real() && v.splitting == Splitting::ramified && ramified_congruences_hold(s, p) &&
                           ev.value == ramified_legendre_value(s, p);
                    break;
                case EvaluationRule::real_positive_zero:
                    good = l.place.is_real() && s.D > 0 && ev.value == Half::zero;
                    break;
                case EvaluationRule::sampled:
                    if (l.place.is_real()) {
                        auto again = real_negative_evaluation(s);
                        good = s.D < 0 && again.status == EvaluationStatus::constant && again.value == ev.value;
                    } else {
                        out.notes.push_back(at + "sampled finite evaluation is not re-derived offline");
                    }
                    break;
                }
                if (!good) out.fail(at + "evaluation rule hypotheses fail");
            }
            if (ev.witness) {
                const auto& w = *ev.witness;
                if (!evaluation_point_verifies(s, l.place, w)) {
                    out.fail(at + "q is not the value of its quotient at a verified local point");
                    good = false;
                } else if (w.q == 0 || hilbert_symbol(w.q, Rational(s.D), l.place) != w.symbol) {
                    out.fail(at + "stored symbol does not match (q, D)");
                    good = false;
                } else if (ev.status == EvaluationStatus::constant && from_symbol(w.symbol) != ev.value) {
                    out.fail(at + "stored symbol contradicts e");
                    good = false;
                }
            }
            if (!good) v.evaluation.status = EvaluationStatus::undecided;
            if (v.evaluation.status == EvaluationStatus::constant) r.sum = r.sum + v.evaluation.value;
            r.locals.push_back(std::move(v));
        }
        r.verdict = decide_verdict(r);
    }
    if (r.sum != c.sum) out.fail("sum is wrong");
    if (r.verdict != c.verdict) out.fail(std::string("verdict is wrong: re-derived ") + to_string(r.verdict));
    r.reciprocity_check = r.verdict == Verdict::counterexample && reciprocity_selfcheck(r);
    if (r.reciprocity_check != c.reciprocity_check) out.fail("reciprocity_check flag is wrong");
    if (r.nonsingular) {
        std::string key = moduli_key(moduli_point(s));
        if (!doc.contains("moduli") || !doc.at("moduli").is_string() || doc.at("moduli").get<std::string>() != key)
            out.fail("moduli key is wrong");
    }
    out.verdict = r.verdict;
    return out;
}

// ---------------------------------------------------------------------------
// Ledger: append-only JSON lines; a malformed line is skipped on load.

struct LedgerEntry {
    std::string surface;
    std::string moduli_key;
    std::string verdict;
    std::string certificate_path; // relative to the ledger's certificate directory

    Json to_json() const {
        return Json{{"surface", surface}, {"moduli_key", moduli_key}, {"verdict", verdict},
                    {"certificate_path", certificate_path}};
    }
};

class Ledger {
public:
    explicit Ledger(std::filesystem::path path) : path_(std::move(path)) { load(); }

    const std::vector<LedgerEntry>& entries() const { return entries_; }
    std::size_t skipped_lines() const { return skipped_; }
    std::set<std::string> keys() const {
        std::set<std::string> k;
        for (const auto& e : entries_) k.insert(e.moduli_key);
        return k;
    }
    std::filesystem::path certificate_dir() const { return path_.string() + ".certs"; }

    /// Writes the certificate file and appends the entry; false if the key is present.
    bool append(const GlobalCertificate& c, const Json& doc) {
        std::string key = doc.at("moduli").get<std::string>();
        for (const auto& e : entries_)
            if (e.moduli_key == key) return false;
        std::filesystem::create_directories(certificate_dir());
        std::string name = c.surface.D.str() + "_" + c.surface.A.str() + "_" + c.surface.B.str() + ".json";
        {
            std::ofstream f(certificate_dir() / name, std::ios::binary | std::ios::trunc);
            f << serialize(doc);
            if (!f) throw std::runtime_error("ledger: cannot write certificate " + name);
        }
        LedgerEntry e{c.surface.to_string(), key, to_string(c.verdict), name};
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        out << e.to_json().dump() << "\n";
        if (!out) throw std::runtime_error("ledger: cannot append to " + path_.string());
        entries_.push_back(std::move(e));
        return true;
    }

private:
    void load() {
        std::ifstream in(path_);
        std::string line;
        std::set<std::string> seen;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                Json j = Json::parse(line);
                LedgerEntry e{j.at("surface").get<std::string>(), j.at("moduli_key").get<std::string>(),
                              j.at("verdict").get<std::string>(), j.at("certificate_path").get<std::string>()};
                if (!seen.insert(e.moduli_key).second) {
                    ++skipped_;
                    continue;
                }
                entries_.push_back(std::move(e));
            } catch (const std::exception&) {
                ++skipped_;
            }
        }
    }

    std::filesystem::path path_;
    std::vector<LedgerEntry> entries_;
    std::size_t skipped_ = 0;
};

} // namespace dp4
