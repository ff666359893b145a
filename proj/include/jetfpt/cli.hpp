#pragma once

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jetfpt/report.hpp"

namespace jetfpt {

// Exit codes: 0 computed (and --assert matched, if given), 1 assert
// mismatch, 2 usage error, 3 parse error, 4 range error, 5 precondition or
// structural error. Verdicts live in the report, never in the exit code.
enum ExitCode {
    exit_ok = 0,
    exit_assert_failed = 1,
    exit_usage = 2,
    exit_parse = 3,
    exit_range = 4,
    exit_precondition = 5,
};

namespace cli_detail {

inline int default_threads() {
    if (const char* env = std::getenv("JETFPT_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

struct InputSpec {
    std::string input_path;
    std::vector<std::string> poly_texts;
    bool use_gen = false;
    int gen_d = 2;
    int gen_n = 0; // 0 = not given; generator defaults to 4, parsing infers
    std::uint64_t seed = 1;
};

/// Splits a polynomial file into blocks at blank lines or ';' lines; a
/// block's lines join with '+', so both one-term-per-line and '+'-separated
/// layouts parse.
inline std::vector<std::string> read_poly_blocks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::vector<std::string> blocks;
    std::string line, current;
    auto flush = [&] {
        if (current.find_first_not_of(" \t\r\n+") != std::string::npos)
            blocks.push_back(current);
        current.clear();
    };
    while (std::getline(in, line)) {
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (trimmed.empty() || trimmed == ";") { flush(); continue; }
        if (!current.empty()) current += " + ";
        current += line;
    }
    flush();
    if (blocks.empty()) throw ParseError("no polynomials in input file: " + path);
    return blocks;
}

inline int scan_max_base_index(const std::string& text) {
    int best = 0;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] != 'x' || !std::isdigit(static_cast<unsigned char>(text[i + 1]))) continue;
        int v = 0;
        std::size_t j = i + 1;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
            v = v * 10 + (text[j++] - '0');
        best = std::max(best, v);
    }
    return best;
}

/// Resolves --input / --poly / --gen into base polynomials over
/// VarTable(N, 0), plus extra input-echo fields for the report.
inline std::pair<std::vector<PolyMod>, json> resolve_polys(const InputSpec& chosen,
                                                           std::uint32_t p) {
    json extra = json::object();
    if (chosen.use_gen) {
        int gn = chosen.gen_n > 0 ? chosen.gen_n : 4;
        GeneralTypePolynomial g = gen_general_type(chosen.gen_d, gn, p, chosen.seed);
        extra["generator"] = {{"d", chosen.gen_d}, {"N", gn}, {"seed", chosen.seed}};
        return {{g.poly}, extra};
    }
    std::vector<std::string> texts = chosen.poly_texts;
    if (!chosen.input_path.empty()) {
        auto blocks = read_poly_blocks(chosen.input_path);
        texts.insert(texts.end(), blocks.begin(), blocks.end());
    }
    if (texts.empty())
        throw ParseError("no input polynomial: pass --poly, --input, or --gen");
    int n = chosen.gen_n;
    for (const auto& t : texts) n = std::max(n, scan_max_base_index(t));
    if (n < 1) throw ParseError("could not infer the variable count; pass --N");
    VarTable vt(n, 0);
    std::vector<PolyMod> polys;
    for (const auto& t : texts) polys.push_back(parse_poly(t, vt, p));
    return {polys, extra};
}

inline std::optional<bool> assert_outcome(const json& rep, const std::string& name) {
    const json& result = rep.at("result");
    const std::string command = rep.at("command");
    auto str_is = [&](const char* key, const std::string& want) -> std::optional<bool> {
        if (!result.contains(key)) return std::nullopt;
        return result.at(key).get<std::string>() == want;
    };
    if (command == "fedder" || command == "matrix") {
        if (name == "f-pure") return str_is("verdict", "F-pure");
        if (name == "not-f-pure") return str_is("verdict", "not-F-pure");
    }
    if (command == "fregular") {
        if (name == "witnessed") return result.at("all_certified").get<bool>();
        if (name == "inconclusive") return !result.at("all_certified").get<bool>();
    }
    if (command == "good-monomial" && name == "good") return result.at("good").get<bool>();
    if (command == "compare-fpt" && name == "inequality-holds")
        return result.at("all_inequalities_hold").get<bool>();
    if (command == "fpt" && name == "defined") {
        for (const auto& row : result.at("rows"))
            if (row.at("r_q").is_null()) return false;
        return true;
    }
    if (command == "certify" && name == "outside-bracket")
        return result.at("outside_bracket").get<bool>();
    if (command == "dims") {
        if (name == "irreducible-complete-intersection" || name == "not-irreducible" ||
            name == "inconclusive")
            return str_is("verdict", name);
    }
    return std::nullopt;
}

inline void render_text(const json& rep, std::ostream& out) {
    const std::string command = rep.at("command");
    const json& result = rep.at("result");
    out << command << ":\n";
    std::function<void(const json&, int)> walk = [&](const json& node, int depth) {
        std::string pad(2 * depth, ' ');
        for (auto it = node.begin(); it != node.end(); ++it) {
            const json& v = it.value();
            if (v.is_object()) {
                out << pad << it.key() << ":\n";
                walk(v, depth + 1);
            } else if (v.is_array()) {
                bool scalars = true;
                for (const auto& item : v)
                    if (item.is_object() || item.is_array()) scalars = false;
                if (scalars) {
                    out << pad << it.key() << ": " << v.dump() << "\n";
                } else {
                    out << pad << it.key() << " (" << v.size() << " entries):\n";
                    for (const auto& item : v) {
                        if (item.is_object()) {
                            out << pad << "  -\n";
                            walk(item, depth + 2);
                        } else {
                            out << pad << "  - " << item.dump() << "\n";
                        }
                    }
                }
            } else {
                out << pad << it.key() << ": " << v.dump() << "\n";
            }
        }
    };
    walk(result, 1);
}

} // namespace cli_detail

/// Parses arguments (without the program name) and runs one subcommand,
/// writing the report to `out`. Testable directly; the binary forwards here.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using cli_detail::InputSpec;

    CLI::App app{"jet scheme Frobenius toolkit"};
    app.require_subcommand(1);

    struct Common {
        std::string format = "text";
        std::string output;
        std::string assertion;
        int threads = cli_detail::default_threads();
    } common;

    std::uint32_t p = 3;
    int m = 0, m_prime = 1, d = 2, n = 4;
    unsigned e = 2, e_max = 2;
    unsigned seeds = 0;
    std::uint64_t seed = 1;
    std::string center = "origin";
    std::string mode = "C";
    std::string monomial;
    bool assume_homogeneous = false, assume_isolated = false, verify_membership = false;
    bool grid = false;
    std::vector<std::string> g_texts;
    InputSpec input;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--output", common.output, "write the report to a file");
        sub->add_option("--assert", common.assertion,
                        "named expectation; exit 1 when the report disagrees");
        sub->add_option("--threads", common.threads, "worker cap (default $JETFPT_THREADS or 1)")
            ->check(CLI::PositiveNumber);
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", input.input_path, "polynomial file");
        sub->add_option("--poly", input.poly_texts, "inline polynomial (repeatable)");
        sub->add_flag("--gen", input.use_gen, "use the seeded general-type generator");
        sub->add_option("--d", input.gen_d, "generator degree");
        sub->add_option("--N", input.gen_n, "variable count (inferred from text if omitted)");
        sub->add_option("--seed", input.seed, "generator seed");
    };

    auto* jets = app.add_subcommand("jets", "jet-scheme defining equations");
    auto* fedder = app.add_subcommand("fedder", "F-purity via the Frobenius residue");
    auto* fregular = app.add_subcommand("fregular", "one-sided F-regularity probe");
    auto* goodmono = app.add_subcommand("good-monomial", "good-monomial certificates");
    auto* fpt = app.add_subcommand("fpt", "finite-q F-pure-threshold approximants");
    auto* cmpfpt = app.add_subcommand("compare-fpt", "threshold drop across jet levels");
    auto* certify = app.add_subcommand("certify", "combinatorial purity certificates");
    auto* matrix = app.add_subcommand("matrix", "exponent matrices and the row-sum program");
    auto* dims = app.add_subcommand("dims", "fiber dimension and irreducibility");
    auto* gen = app.add_subcommand("gen", "seeded general-type polynomial");

    for (auto* sub : {jets, fedder, fregular, goodmono, fpt, cmpfpt}) {
        add_common(sub);
        add_input(sub);
        sub->add_option("--p", p, "coefficient prime")->required();
        sub->add_option("--m", m, "jet level");
    }
    add_common(matrix);
    add_input(matrix);
    matrix->add_option("--p", p, "coefficient prime (modes A and lp --grid)");
    matrix->add_option("--m", m, "jet level / matrix size");
    fregular->add_option("--emax", e_max, "largest Frobenius exponent to try");
    fregular->add_option("--g", g_texts, "probe polynomial in the jet ring (repeatable)");
    goodmono->add_option("--monomial", monomial, "verify this monomial instead of searching");
    fpt->add_option("--emax", e_max, "rows e = 1..emax");
    fpt->add_option("--center", center, "origin | trivial-jet:<level>");
    cmpfpt->add_option("--mprime", m_prime, "higher jet level")->required();
    cmpfpt->add_option("--emax", e_max, "rows e = 1..emax");
    matrix->add_option("--mode", mode, "A | C | lp")->check(CLI::IsMember({"A", "C", "lp"}));
    matrix->add_flag("--grid", grid, "lp mode: also run the denominator-(p-1) grid search");

    add_common(certify);
    certify->add_option("--d", d, "degree")->required();
    certify->add_option("--N", n, "variables")->required();
    certify->add_option("--m", m, "jet level");
    certify->add_option("--p", p, "prime")->required();
    certify->add_option("--e", e, "Frobenius exponent (q = p^e)");
    certify->add_option("--seed", seed, "first seed of the panel");
    certify->add_option("--seeds", seeds, "panel size for membership verification");
    certify->add_flag("--verify", verify_membership, "run the membership extraction (8 seeds)");

    add_common(dims);
    dims->add_option("--d", d, "degree")->required();
    dims->add_option("--N", n, "variables")->required();
    dims->add_option("--m", m, "jet level")->required();
    dims->add_flag("--homogeneous", assume_homogeneous, "assert homogeneity");
    dims->add_flag("--isolated-singularity", assume_isolated,
                   "assert an isolated singularity at the origin");

    add_common(gen);
    gen->add_option("--d", d, "degree")->required();
    gen->add_option("--N", n, "variables")->required();
    gen->add_option("--p", p, "prime")->required();
    gen->add_option("--seed", seed, "seed");

    std::vector<const char*> argv;
    argv.push_back("jetfpt");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& ex) {
        return app.exit(ex, out, err) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (!is_prime(p)) throw PreconditionError("--p must be prime");
        json rep;
        if (app.got_subcommand(jets)) {
            auto [polys, extra] = cli_detail::resolve_polys(input, p);
            rep = report_jets(polys, m, extra);
        } else if (app.got_subcommand(fedder)) {
            auto [polys, extra] = cli_detail::resolve_polys(input, p);
            rep = report_fedder(polys, m, common.threads, extra);
        } else if (app.got_subcommand(fregular)) {
            auto [polys, extra] = cli_detail::resolve_polys(input, p);
            rep = report_fregular(polys, m, e_max, g_texts, common.threads, extra);
        } else if (app.got_subcommand(goodmono)) {
            auto [polys, extra] = cli_detail::resolve_polys(input, p);
            rep = report_good_monomial(polys, m,
                                       monomial.empty() ? std::nullopt
                                                        : std::optional<std::string>(monomial),
                                       common.threads, extra);
        } else if (app.got_subcommand(fpt)) {
            int center_level = -1;
            if (center != "origin") {
                const std::string prefix = "trivial-jet:";
                if (center.rfind(prefix, 0) != 0)
                    throw ParseError("--center must be 'origin' or 'trivial-jet:<level>'");
                center_level = std::stoi(center.substr(prefix.size()));
            }
            auto [polys, extra] = cli_detail::resolve_polys(input, p);
            rep = report_fpt(polys, m, center_level, e_max, common.threads, extra);
        } else if (app.got_subcommand(cmpfpt)) {
            auto [polys, extra] = cli_detail::resolve_polys(input, p);
            rep = report_compare_fpt(polys, m, m_prime, e_max, common.threads, extra);
        } else if (app.got_subcommand(certify)) {
            unsigned panel = seeds ? seeds : (verify_membership ? 8u : 0u);
            rep = report_certify(d, n, m, p, e, seed, panel, common.threads);
        } else if (app.got_subcommand(matrix)) {
            if (mode == "C") {
                rep = report_matrix_C(input.gen_d, m);
            } else if (mode == "lp") {
                rep = report_matrix_lp(input.gen_d, m,
                                       grid ? std::optional<std::uint32_t>(p) : std::nullopt);
            } else {
                auto [polys, extra] = cli_detail::resolve_polys(input, p);
                rep = report_matrix_A(polys, m, common.threads, extra);
            }
        } else if (app.got_subcommand(dims)) {
            rep = report_dims(d, n, m, assume_homogeneous, assume_isolated);
        } else if (app.got_subcommand(gen)) {
            rep = report_gen(d, n, p, seed);
        }

        std::ostringstream rendered;
        if (common.format == "json") rendered << rep.dump(2) << "\n";
        else cli_detail::render_text(rep, rendered);
        if (!common.output.empty()) {
            std::ofstream f(common.output);
            if (!f) throw ParseError("cannot open output file: " + common.output);
            f << rendered.str();
        } else {
            out << rendered.str();
        }

        if (!common.assertion.empty()) {
            auto outcome = cli_detail::assert_outcome(rep, common.assertion);
            if (!outcome) {
                err << "error: unknown assertion '" << common.assertion << "' for this command\n";
                return exit_usage;
            }
            return *outcome ? exit_ok : exit_assert_failed;
        }
        return exit_ok;
    } catch (const ParseError& ex) {
        err << "parse error: " << ex.what() << "\n";
        return exit_parse;
    } catch (const RangeError& ex) {
        err << "range error: " << ex.what() << "\n";
        return exit_range;
    } catch (const PreconditionError& ex) {
        err << "precondition error: " << ex.what() << "\n";
        return exit_precondition;
    } catch (const StructureError& ex) {
        err << "structural error: " << ex.what() << "\n";
        return exit_precondition;
    }
}

} // namespace jetfpt
