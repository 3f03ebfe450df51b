// dp4: verify, search, moduli, selfcheck.

#include "dp4/dp4.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace dp4;

enum Exit { kCounterexample = 0, kNoObstruction = 1, kInvalid = 2, kUndecided = 3 };

int exit_code(Verdict v, bool reciprocity) {
    switch (v) {
    case Verdict::counterexample: return reciprocity ? kCounterexample : kUndecided;
    case Verdict::no_obstruction_from_alpha:
    case Verdict::not_locally_solvable: return kNoObstruction;
    case Verdict::singular: return kInvalid;
    case Verdict::undecided: return kUndecided;
    }
    return kUndecided;
}

struct Common {
    std::optional<std::int64_t> height_bound;
    std::optional<int> precision_cap;
    bool text = false;
    bool json = false;

    Config config() const {
        Config c = config_from_environment();
        if (height_bound) c.height_bound = *height_bound;
        if (precision_cap) c.precision_cap = *precision_cap;
        return c;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--height-bound", c.height_bound, "rational point search bound (0 disables)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--precision-cap", c.precision_cap, "largest p-adic precision tried")->check(CLI::PositiveNumber);
    auto* t = cmd->add_flag("--text", c.text, "human-readable output");
    auto* j = cmd->add_flag("--json", c.json, "JSON output (default)");
    t->excludes(j);
}

void print_text(std::ostream& os, const GlobalCertificate& c) {
    os << "surface " << c.surface.to_string() << (c.nonsingular ? "" : " (singular)") << "\n";
    for (const auto& l : c.locals) {
        os << "  " << l.place.to_string() << " " << to_string(l.splitting) << ": "
           << to_string(l.solvability.status);
        if (l.solvability.witness) os << " by " << to_string(l.solvability.witness->rule);
        os << "; evaluation " << to_string(l.evaluation.status);
        if (l.evaluation.status == EvaluationStatus::constant)
            os << " " << to_string(l.evaluation.value) << " (" << to_string(l.evaluation.rule) << ")";
        if (!l.evaluation.detail.empty()) os << " [" << l.evaluation.detail << "]";
        os << "\n";
    }
    for (const auto& b : c.blanket_rules) os << "  elsewhere: " << b << "\n";
    os << "sum " << to_string(c.sum) << "\n";
    os << "verdict " << to_string(c.verdict) << "\n";
    os << "reciprocity_check " << (c.reciprocity_check ? "pass" : "fail") << "\n";
    if (c.nonsingular) os << "moduli " << moduli_key(moduli_point(c.surface)) << "\n";
}

SurfaceParams parse_surface(const std::string& d, const std::string& a, const std::string& b) {
    return SurfaceParams::checked(parse_integer(d), parse_integer(a), parse_integer(b));
}

int cmd_check(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot read " << path << "\n";
        return kInvalid;
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const std::exception& e) {
        std::cerr << "not JSON: " << e.what() << "\n";
        return kInvalid;
    }
    auto check = check_certificate(doc);
    for (const auto& n : check.notes) std::cout << "note: " << n << "\n";
    for (const auto& p : check.problems) std::cout << "problem: " << p << "\n";
    std::cout << "certificate " << (check.ok ? "valid" : "REJECTED") << "; verdict " << to_string(check.verdict)
              << "\n";
    if (!check.ok) return kInvalid;
    return exit_code(check.verdict, check.verdict == Verdict::counterexample);
}

int cmd_verify(const std::vector<std::string>& args, const Common& common, const std::string& output) {
    if (args.size() != 3) {
        std::cerr << "verify expects D A B\n";
        return kInvalid;
    }
    SurfaceParams s;
    try {
        s = parse_surface(args[0], args[1], args[2]);
    } catch (const std::exception& e) {
        std::cerr << "invalid surface: " << e.what() << "\n";
        return kInvalid;
    }
    Config cfg = common.config();
    GlobalCertificate cert = global_obstruction(s, cfg.limits());
    Json doc = certificate_to_json(cert);
    int code = exit_code(cert.verdict, cert.reciprocity_check);
    if (cert.verdict == Verdict::counterexample && cfg.height_bound > 0) {
        auto pt = rational_point_search(s, cfg.height_bound);
        doc["point_search"] = Json{{"height_bound", std::to_string(cfg.height_bound)},
                                   {"found", pt ? Json(Json::array({(*pt)[0].str(), (*pt)[1].str(), (*pt)[2].str(),
                                                                    (*pt)[3].str(), (*pt)[4].str()}))
                                                : Json(nullptr)}};
        if (pt) {
            std::cerr << "inconsistent: rational point found on a claimed counterexample\n";
            code = kUndecided;
        }
    }
    std::ostringstream text;
    if (common.text) print_text(text, cert);
    else text << serialize(doc);
    if (!output.empty()) {
        std::ofstream f(output, std::ios::binary | std::ios::trunc);
        f << serialize(doc);
        if (!f) {
            std::cerr << "cannot write " << output << "\n";
            return kInvalid;
        }
        if (common.text) std::cout << text.str();
    } else {
        std::cout << text.str();
    }
    return code;
}

int cmd_search(const std::string& d, std::size_t count, std::uint64_t seed, const std::string& ledger_path,
               const Common& common) {
    Integer D;
    try {
        D = parse_integer(d);
        check_construction_input(D, 2, 0, 1);
    } catch (const std::exception& e) {
        std::cerr << "invalid discriminant: " << e.what() << "\n";
        return kInvalid;
    }
    Config cfg = common.config();
    Ledger ledger(ledger_path);
    if (ledger.skipped_lines()) std::cerr << "ledger: skipped " << ledger.skipped_lines() << " unreadable lines\n";
    SearchResult res;
    try {
        res = search_counterexamples(D, count, seed, cfg.limits(), 2000, ledger.keys());
    } catch (const std::exception& e) {
        std::cerr << "search failed: " << e.what() << "\n";
        return kInvalid;
    }
    Json summary = Json::array();
    for (std::size_t i = 0; i < res.surfaces.size(); ++i) {
        Json doc = certificate_to_json(res.certificates[i]);
        ledger.append(res.certificates[i], doc);
        if (common.text) std::cout << res.surfaces[i].to_string() << " " << res.keys[i] << "\n";
        summary.push_back(Json{{"surface", res.surfaces[i].to_string()}, {"moduli_key", res.keys[i]}});
    }
    if (!common.text) std::cout << summary.dump(2) << "\n";
    for (const auto& m : res.diagnostics) std::cerr << "diagnostic: " << m << "\n";
    std::cerr << res.surfaces.size() << " of " << count << " appended to " << ledger_path << "\n";
    return res.complete ? kCounterexample : kUndecided;
}

int cmd_moduli(const std::vector<std::string>& args, const Common& common) {
    if (args.size() != 3) {
        std::cerr << "moduli expects D A B\n";
        return kInvalid;
    }
    try {
        SurfaceParams s = parse_surface(args[0], args[1], args[2]);
        std::string key = moduli_key(moduli_point(s));
        if (common.text) std::cout << key << "\n";
        else std::cout << Json{{"surface", s.to_string()}, {"moduli", key}}.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "moduli: " << e.what() << "\n";
        return kInvalid;
    }
}

int cmd_selfcheck(const std::string& suite, const std::string& fault) {
    std::vector<std::string> names = suite.empty() ? suite_names() : std::vector<std::string>{suite};
    bool all = true;
    for (const auto& n : names) {
        SuiteResult r;
        try {
            r = run_suite(n, fault);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return kInvalid;
        }
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases): " << r.detail << "\n";
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certify Brauer-Manin obstructions on the surfaces T0T1 = T2^2 - D T3^2, "
                 "(T0+AT1)(T0+BT1) = T2^2 - D T4^2"};
    app.require_subcommand(1);

    Common common;
    std::vector<std::string> surface_args;
    std::string output, check_path;
    auto* verify = app.add_subcommand("verify", "certify one surface D A B");
    verify->add_option("params", surface_args, "D A B")->expected(0, 3);
    verify->add_option("--output,-o", output, "write the certificate here");
    verify->add_option("--check-certificate", check_path, "re-verify a certificate file offline");
    add_common(verify, common);

    std::string disc;
    std::size_t count = 1;
    std::uint64_t seed = 1;
    std::string ledger = "dp4-ledger.jsonl";
    auto* search = app.add_subcommand("search", "generate certified surfaces for a discriminant");
    search->add_option("D", disc, "discriminant")->required();
    search->add_option("--count", count, "surfaces wanted")->check(CLI::PositiveNumber);
    search->add_option("--seed", seed, "shuffle seed");
    search->add_option("--ledger", ledger, "JSON-lines ledger path");
    add_common(search, common);

    std::vector<std::string> moduli_args;
    auto* moduli = app.add_subcommand("moduli", "canonical invariant triple of D A B");
    moduli->add_option("params", moduli_args, "D A B")->expected(3);
    add_common(moduli, common);

    std::string suite, fault;
    auto* selfcheck = app.add_subcommand("selfcheck", "run the property suites");
    selfcheck->add_option("--suite", suite, "reciprocity | singularity | invariance | patterns");
    selfcheck->add_option("--inject-fault", fault, "hilbert2: drop the epsilon term of the 2-adic symbol");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kInvalid;
    }

    try {
        if (*verify) {
            if (!check_path.empty()) return cmd_check(check_path);
            return cmd_verify(surface_args, common, output);
        }
        if (*search) return cmd_search(disc, count, seed, ledger, common);
        if (*moduli) return cmd_moduli(moduli_args, common);
        if (*selfcheck) return cmd_selfcheck(suite, fault);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}
