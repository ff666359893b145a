#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jetfpt/certificates.hpp"
#include "jetfpt/fpt.hpp"
#include "jetfpt/frobenius.hpp"
#include "jetfpt/gen.hpp"
#include "jetfpt/geometry.hpp"
#include "jetfpt/jet.hpp"

namespace jetfpt {

// JSON reports are the canonical machine output of every subcommand. Keys
// keep insertion order and every number that is not a plain integer is an
// exact rational rendered as a string, so identical inputs produce
// byte-identical reports regardless of thread count.

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline json poly_texts(const std::vector<PolyMod>& fs) {
    json arr = json::array();
    for (const auto& f : fs) arr.push_back(serialize_poly(f));
    return arr;
}

inline json rational_json(const std::optional<Rational>& r) {
    return r ? json(rational_to_string(*r)) : json(nullptr);
}

inline json certificate_json(const GoodMonomialCertificate& cert, const VarTable& vt) {
    json prov = json::array();
    for (std::size_t i = 0; i < cert.factor_labels.size(); ++i) {
        json picks = json::array();
        for (const auto& pick : cert.provenance[i])
            picks.push_back({{"monomial", monomial_to_string(pick.monomial, vt)},
                             {"coefficient", pick.coeff}});
        prov.push_back({{"l", cert.factor_labels[i].first},
                        {"j", cert.factor_labels[i].second},
                        {"picks", std::move(picks)}});
    }
    return {{"q", cert.q},
            {"monomial", monomial_to_string(cert.monomial, vt)},
            {"coefficient", cert.coefficient},
            {"provenance", std::move(prov)}};
}

inline json report_shell(const std::string& command, json inputs) {
    return {{"schema_version", kSchemaVersion}, {"command", command},
            {"inputs", std::move(inputs)}};
}

inline json matrix_json(const std::vector<std::vector<Rational>>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        json r = json::array();
        for (const auto& v : row) r.push_back(rational_to_string(v));
        out.push_back(std::move(r));
    }
    return out;
}

inline json rationals_json(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(rational_to_string(x));
    return out;
}

} // namespace detail

inline json report_jets(const std::vector<PolyMod>& f_list, int m, json extra_inputs = {}) {
    JetSystem sys = jet_equations(f_list, m);
    json inputs = {{"p", sys.p}, {"N", sys.n}, {"m", m},
                   {"polynomials", detail::poly_texts(f_list)}};
    if (!extra_inputs.empty()) inputs.update(extra_inputs);
    json rep = detail::report_shell("jets", std::move(inputs));
    json eqs = json::array();
    for (std::size_t l = 0; l < sys.equations.size(); ++l) {
        json per_j = json::array();
        for (const auto& fj : sys.equations[l]) per_j.push_back(serialize_poly(fj));
        eqs.push_back({{"l", l},
                       {"degree", sys.degrees[l] ? json(*sys.degrees[l]) : json(nullptr)},
                       {"F", std::move(per_j)}});
    }
    rep["result"] = {{"variable_count", sys.vt.count()}, {"equations", std::move(eqs)}};
    return rep;
}

inline json report_fedder(const std::vector<PolyMod>& f_list, int m, int threads = 1,
                          json extra_inputs = {}) {
    JetSystem sys = jet_equations(f_list, m);
    json inputs = {{"p", sys.p}, {"N", sys.n}, {"m", m},
                   {"polynomials", detail::poly_texts(f_list)}};
    if (!extra_inputs.empty()) inputs.update(extra_inputs);
    json rep = detail::report_shell("fedder", std::move(inputs));
    PurityResult purity = is_f_pure(sys, threads);
    rep["result"] = {{"verdict", purity.f_pure ? "F-pure" : "not-F-pure"}};
    if (purity.certificate)
        rep["result"]["certificate"] = detail::certificate_json(*purity.certificate, sys.vt);
    return rep;
}

inline json report_good_monomial(const std::vector<PolyMod>& f_list, int m,
                                 const std::optional<std::string>& monomial_text,
                                 int threads = 1, json extra_inputs = {}) {
    JetSystem sys = jet_equations(f_list, m);
    json inputs = {{"p", sys.p}, {"N", sys.n}, {"m", m},
                   {"polynomials", detail::poly_texts(f_list)},
                   {"monomial", monomial_text ? json(*monomial_text) : json(nullptr)}};
    if (!extra_inputs.empty()) inputs.update(extra_inputs);
    json rep = detail::report_shell("good-monomial", std::move(inputs));

    GoodMonomialCertificate cert;
    cert.q = sys.p;
    if (monomial_text) {
        PolyMod probe = parse_poly("1 " + *monomial_text, sys.vt, sys.p);
        if (probe.term_count() != 1)
            throw ParseError("good-monomial: expected a single monomial");
        cert.monomial = probe.terms().front().first;
        std::vector<FactorPower> factors;
        for (std::size_t l = 0; l < sys.equations.size(); ++l)
            for (int j = 0; j <= sys.level; ++j) {
                factors.push_back({&sys.equations[l][j], sys.p - 1});
                cert.factor_labels.emplace_back(static_cast<int>(l), j);
            }
        cert.coefficient = coefficient_of(cert.monomial, factors, &cert.provenance);
        bool good = cert.coefficient != 0 && cert.monomial.outside_bracket(sys.p);
        rep["result"] = {{"good", good},
                         {"outside_bracket", cert.monomial.outside_bracket(sys.p)},
                         {"coefficient", cert.coefficient}};
        if (good) rep["result"]["certificate"] = detail::certificate_json(cert, sys.vt);
        return rep;
    }

    PurityResult purity = is_f_pure(sys, threads);
    rep["result"] = {{"good", purity.f_pure}};
    if (purity.certificate)
        rep["result"]["certificate"] = detail::certificate_json(*purity.certificate, sys.vt);
    return rep;
}

inline json report_fregular(const std::vector<PolyMod>& f_list, int m, unsigned e_max,
                            const std::vector<std::string>& g_texts, int threads = 1,
                            json extra_inputs = {}) {
    JetSystem sys = jet_equations(f_list, m);
    json inputs = {{"p", sys.p}, {"N", sys.n}, {"m", m}, {"e_max", e_max},
                   {"polynomials", detail::poly_texts(f_list)}};
    std::vector<PolyMod> panel;
    if (g_texts.empty()) {
        panel = default_g_panel(sys);
        inputs["g"] = nullptr; // default panel
    } else {
        json gj = json::array();
        for (const auto& text : g_texts) {
            panel.push_back(parse_poly(text, sys.vt, sys.p));
            gj.push_back(serialize_poly(panel.back()));
        }
        inputs["g"] = std::move(gj);
    }
    if (!extra_inputs.empty()) inputs.update(extra_inputs);
    json rep = detail::report_shell("fregular", std::move(inputs));

    json rows = json::array();
    bool all_certified = true;
    for (const auto& g : panel) {
        json row = {{"g", serialize_poly(g)}};
        RegularProbeResult probe = f_regular_probe(sys, g, e_max, threads);
        if (probe.verdict == RegularProbeVerdict::certified_for_g) {
            row["verdict"] = "certified-regular-for-g";
            row["witness_e"] = *probe.witness_e;
            if (probe.witness_monomial) {
                row["witness_monomial"] = monomial_to_string(*probe.witness_monomial, sys.vt);
                json head = json::object();
                for (std::size_t v = 0; v < sys.vt.count(); ++v)
                    head[sys.vt.name(v)] = probe.headroom[v];
                row["headroom"] = std::move(head);
            } else {
                row["witness_monomial"] = nullptr;
            }
        } else {
            row["verdict"] = "inconclusive";
            all_certified = false;
        }
        rows.push_back(std::move(row));
    }
    rep["result"] = {{"all_certified", all_certified}, {"probes", std::move(rows)}};
    return rep;
}

inline json report_fpt(const std::vector<PolyMod>& f_list, int m, int center_level,
                       unsigned e_max, int threads = 1, json extra_inputs = {}) {
    JetSystem sys = jet_equations(f_list, m);
    int level = center_level < 0 ? m : center_level;
    json inputs = {{"p", sys.p}, {"N", sys.n}, {"m", m}, {"e_max", e_max},
                   {"center", center_level < 0 ? json("origin")
                                               : json("trivial-jet:" + std::to_string(level))},
                   {"polynomials", detail::poly_texts(f_list)}};
    if (!extra_inputs.empty()) inputs.update(extra_inputs);
    json rep = detail::report_shell("fpt", std::move(inputs));

    std::vector<std::size_t> center = trivial_jet_variables(sys, level);
    FptTable table = fpt_sequence(sys, center, e_max, threads);
    json names = json::array();
    for (auto v : table.center) names.push_back(sys.vt.name(v));
    json rows = json::array();
    for (const auto& row : table.rows)
        rows.push_back({{"e", row.e},
                        {"q", row.q},
                        {"r_q", row.r_q ? json(*row.r_q) : json(nullptr)},
                        {"ratio", detail::rational_json(row.ratio)}});
    rep["result"] = {{"center_variables", std::move(names)}, {"rows", std::move(rows)}};
    return rep;
}

inline json report_compare_fpt(const std::vector<PolyMod>& f_list, int m, int m_prime,
                               unsigned e_max, int threads = 1, json extra_inputs = {}) {
    json inputs = {{"p", f_list.front().p()}, {"m", m}, {"m_prime", m_prime}, {"e_max", e_max},
                   {"polynomials", detail::poly_texts(f_list)}};
    if (!extra_inputs.empty()) inputs.update(extra_inputs);
    json rep = detail::report_shell("compare-fpt", std::move(inputs));
    FptCompareReport cmp = jet_fpt_compare(f_list, m, m_prime, e_max, threads);
    json rows = json::array();
    bool all_hold = true;
    for (const auto& row : cmp.rows) {
        rows.push_back({{"e", row.e},
                        {"q", row.q},
                        {"r_q", row.r_q ? json(*row.r_q) : json(nullptr)},
                        {"r_prime_q", row.r_prime_q ? json(*row.r_prime_q) : json(nullptr)},
                        {"inequality_holds",
                         row.inequality_holds ? json(*row.inequality_holds) : json(nullptr)},
                        {"ratio_gap", detail::rational_json(row.ratio_gap)}});
        if (!row.inequality_holds || !*row.inequality_holds) all_hold = false;
    }
    rep["result"] = {{"order_excess", cmp.order_excess},
                     {"all_inequalities_hold", all_hold},
                     {"rows", std::move(rows)}};
    return rep;
}

inline json report_certify(int d, int n, int m, std::uint32_t p, unsigned e,
                           std::uint64_t seed, unsigned seed_count, int threads = 1) {
    json rep = detail::report_shell(
        "certify", {{"d", d}, {"N", n}, {"m", m}, {"p", p}, {"e", e},
                    {"seed", seed}, {"seeds", seed_count}});
    VarTable vt(n, m);
    LMonomialSet set = build_l_monomials(d, n, m);
    auto rows_json = [&](const std::vector<LTermChoice>& rows) {
        json out = json::array();
        for (const auto& row : rows) {
            json tuple = json::array();
            for (int i : row.xi_tuple) tuple.push_back(i);
            out.push_back({{"j", row.j},
                           {"term", monomial_to_string(row.term, vt)},
                           {"xi", std::move(tuple)},
                           {"integer_factor", row.integer_factor}});
        }
        return out;
    };
    MMonomialReport mrep = build_m_monomial(d, n, m, p, e);
    std::string m_text;
    for (std::size_t v = 0; v < vt.count(); ++v)
        if (mrep.exponents[v]) {
            if (!m_text.empty()) m_text += ' ';
            m_text += vt.name(v);
            if (mrep.exponents[v] > 1) m_text += "^" + std::to_string(mrep.exponents[v]);
        }
    rep["result"] = {
        {"decomposition", {{"a", mrep.dec.a}, {"b", mrep.dec.b}, {"c", mrep.dec.c}}},
        {"q", mrep.q},
        {"L1", rows_json(set.l1)},
        {"L2", rows_json(set.l2)},
        {"L3", rows_json(set.l3)},
        {"M", m_text.empty() ? "1" : m_text},
        {"headroom",
         {{"max_weight0", mrep.max_weight0},
          {"bound_weight0", mrep.bound_weight0},
          {"margin_weight0", mrep.q - mrep.max_weight0},
          {"max_positive_weight", mrep.max_positive},
          {"bound_positive_weight", mrep.bound_positive},
          {"margin_positive_weight", mrep.q - mrep.max_positive}}},
        {"outside_bracket", mrep.outside_bracket}};
    if (seed_count > 0) {
        json results = json::array();
        unsigned nonzero = 0;
        for (unsigned i = 0; i < seed_count; ++i) {
            std::uint64_t s = seed + i;
            GeneralTypePolynomial g = gen_general_type(d, n, p, s);
            std::uint32_t coeff = verify_m_membership(g.poly, mrep, threads);
            if (coeff) ++nonzero;
            results.push_back({{"seed", s}, {"coefficient", coeff}});
        }
        rep["result"]["membership"] = {{"nonzero_seeds", nonzero},
                                       {"per_seed", std::move(results)}};
    }
    return rep;
}

inline json report_matrix_C(int d, int m) {
    json rep = detail::report_shell("matrix", {{"mode", "C"}, {"d", d}, {"m", m}});
    ExponentMatrix mat = matrix_C(d, m);
    MatrixConditionReport cond = check_conditions(mat, d);
    rep["result"] = {{"entries", detail::matrix_json(mat.entries)},
                     {"gamma", detail::rationals_json(mat.gamma)},
                     {"column_sums", detail::rationals_json(mat.col_sums)},
                     {"weighted_column_sums", detail::rationals_json(mat.weighted_col_sums)},
                     {"conditions",
                      {{"upper_triangular", cond.upper_triangular},
                       {"column_sums_equal_d", cond.col_sums_equal_d},
                       {"weighted_sums_equal_j", cond.weighted_sums_equal_j}}}};
    return rep;
}

inline json report_matrix_lp(int d, int m, std::optional<std::uint32_t> grid_p) {
    json rep = detail::report_shell(
        "matrix", {{"mode", "lp"}, {"d", d}, {"m", m},
                   {"grid_p", grid_p ? json(*grid_p) : json(nullptr)}});
    MinMaxRowSumResult lp = lp_min_max_rowsum(d, m);
    rep["result"] = {{"optimum", rational_to_string(lp.optimum)},
                     {"witness", detail::matrix_json(lp.witness)}};
    if (grid_p) {
        auto grid = grid_min_max_rowsum(d, m, *grid_p);
        rep["result"]["grid_optimum"] = grid ? json(rational_to_string(*grid)) : json(nullptr);
        if (grid) rep["result"]["grid_matches_lp"] = (*grid == lp.optimum);
    }
    return rep;
}

inline json report_matrix_A(const std::vector<PolyMod>& f_list, int m, int threads = 1,
                            json extra_inputs = {}) {
    JetSystem sys = jet_equations(f_list, m);
    json inputs = {{"mode", "A"}, {"p", sys.p}, {"N", sys.n}, {"m", m},
                   {"polynomials", detail::poly_texts(f_list)}};
    if (!extra_inputs.empty()) inputs.update(extra_inputs);
    json rep = detail::report_shell("matrix", std::move(inputs));
    PurityResult purity = is_f_pure(sys, threads);
    if (!purity.f_pure) {
        rep["result"] = {{"verdict", "not-F-pure"},
                         {"note", "no good monomial exists at q = p, so there is no matrix"}};
        return rep;
    }
    MatrixAReport arep = extract_matrix_A(*purity.certificate, sys);
    rep["result"] = {{"verdict", "F-pure"},
                     {"certificate", detail::certificate_json(*purity.certificate, sys.vt)},
                     {"entries", detail::matrix_json(arep.matrix.entries)},
                     {"alpha", detail::rationals_json(arep.matrix.row_sums)},
                     {"column_sums", detail::rationals_json(arep.matrix.col_sums)},
                     {"weighted_column_sums",
                      detail::rationals_json(arep.matrix.weighted_col_sums)},
                     {"conditions",
                      {{"upper_triangular", arep.conditions.upper_triangular},
                       {"column_sums_equal_d", arep.conditions.col_sums_equal_d},
                       {"weighted_sums_equal_j", arep.conditions.weighted_sums_equal_j},
                       {"row_sums_at_most_N", arep.conditions.row_sums_at_most_n}}}};
    return rep;
}

inline json report_dims(int d, int n, int m, bool homogeneous, bool isolated) {
    json rep = detail::report_shell(
        "dims", {{"d", d}, {"N", n}, {"m", m},
                 {"assume_homogeneous", homogeneous},
                 {"assume_isolated_singularity", isolated}});
    JetGeometryReport geo = irreducibility_verdict(d, n, m, homogeneous, isolated);
    const char* verdict =
        geo.verdict == JetVerdict::irreducible_complete_intersection
            ? "irreducible-complete-intersection"
            : geo.verdict == JetVerdict::not_irreducible ? "not-irreducible" : "inconclusive";
    rep["result"] = {{"fiber_dimension", geo.fiber_dim},
                     {"fiber_dimension_is_lower_bound", geo.fiber_dim_is_lower_bound},
                     {"threshold", geo.threshold},
                     {"verdict", verdict}};
    return rep;
}

inline json report_gen(int d, int n, std::uint32_t p, std::uint64_t seed) {
    json rep = detail::report_shell("gen", {{"d", d}, {"N", n}, {"p", p}, {"seed", seed}});
    GeneralTypePolynomial g = gen_general_type(d, n, p, seed);
    json coeffs = json::array();
    for (const auto& [tuple, c] : g.coefficients) {
        json t = json::array();
        for (int i : tuple) t.push_back(i);
        coeffs.push_back({{"indices", std::move(t)}, {"value", c}});
    }
    rep["result"] = {{"polynomial", serialize_poly(g.poly)},
                     {"term_count", g.poly.term_count()},
                     {"coefficients", std::move(coeffs)}};
    return rep;
}

} // namespace jetfpt
