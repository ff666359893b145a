#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jetfpt/extract.hpp"
#include "jetfpt/jet.hpp"
#include "jetfpt/poly.hpp"

namespace jetfpt {

/// Witness that the jet system is F-pure at q: a monomial outside m^[q]
/// carried by F^{q-1} with nonzero coefficient, plus one factorization
/// into terms of the factor copies.
struct GoodMonomialCertificate {
    std::uint32_t q = 0;
    Monomial monomial;
    std::uint32_t coefficient = 0;
    std::vector<std::pair<int, int>> factor_labels; // (l, j) per factor
    Provenance provenance;                          // aligned with factor_labels
};

/// F = prod_{l,j} F_l^(j), reduced mod m^[cap] while multiplying.
inline PolyMod fedder_product(const JetSystem& sys, int cap, int threads = 1) {
    PolyMod f = PolyMod::constant(sys.vt, sys.p, 1);
    for (const auto* eq : sys.all_equations()) f = mul_pruned(f, *eq, cap, threads);
    return f;
}

/// F^{q-1} mod m^[q] for q = p^e <= 256; empty iff F^{q-1} lies in m^[q].
inline PolyMod fedder_residue(const JetSystem& sys, std::uint32_t q, int threads = 1) {
    frobenius_exponent(q, sys.p); // validates q = p^e <= 256
    PolyMod f = fedder_product(sys, static_cast<int>(q), threads);
    return power_residue(f, q - 1, static_cast<int>(q), threads);
}

namespace detail {

inline std::string terms_key(const PolyMod& f) {
    std::string key;
    for (const auto& [m, c] : f.terms()) {
        key.append(reinterpret_cast<const char*>(m.exponents().data()), m.nvars());
        key += static_cast<char>(c & 0xff);
        key += static_cast<char>((c >> 8) & 0xff);
    }
    return key;
}

/// Splits f = sum_mu x^mu * piece_mu(x)^[p] by base-p exponent digits.
/// Pieces come out keyed by digit monomial, in canonical digit order.
inline std::map<Monomial, PolyMod> digit_split(const PolyMod& f, std::uint32_t p) {
    std::map<Monomial, std::vector<PolyMod::Term>> groups;
    for (const auto& [m, c] : f.terms()) {
        Monomial digit(m.nvars()), quot(m.nvars());
        for (std::size_t v = 0; v < m.nvars(); ++v) {
            digit.set_exp(v, m.exp(v) % p);
            quot.set_exp(v, m.exp(v) / p);
        }
        groups[digit].emplace_back(std::move(quot), c);
    }
    std::map<Monomial, PolyMod> pieces;
    for (auto& [digit, terms] : groups)
        pieces.emplace(digit, PolyMod::from_terms(f.vars(), f.p(), std::move(terms)));
    return pieces;
}

/// Reduces a list of polynomials to a linear basis of their span over F_p.
/// Pivots are the lex-greatest monomials, normalized to coefficient 1;
/// input order is preserved for the surviving rows, so the output is
/// deterministic.
inline std::vector<PolyMod> linear_span_basis(std::vector<PolyMod> rows) {
    std::vector<PolyMod> basis;
    for (auto& row : rows) {
        for (const auto& b : basis) {
            if (row.is_zero()) break;
            std::uint32_t c = row.coeff_of(b.terms().back().first);
            if (c) row = row.add(b.scaled(-static_cast<long long>(c)));
        }
        if (row.is_zero()) continue;
        std::uint32_t lead = row.terms().back().second;
        basis.push_back(lead == 1 ? std::move(row) : row.scaled(mod_inv(lead, row.p())));
    }
    return basis;
}

/// Exact decision of g * F^{q-1} not in m^[q] for q = p^e, without
/// materializing the residue. Writing h = g * F^{p-1} = sum_mu x^mu * h_mu^[p]
/// over base-p digits gives g * F^{p^e - 1} not in m^[p^e] iff some
/// h_mu * F^{p^{e-1} - 1} survives m^[p^{e-1}]; the digit pieces may be
/// replaced by a basis of their linear span, which keeps the recursion
/// narrow. fp1 must be F^{p-1} reduced mod m^[p^e] or finer.
inline bool survives_rec(unsigned e, const PolyMod& g, const PolyMod& fp1, std::uint32_t p,
                         int threads) {
    if (e == 0) return g.constant_term() != 0;
    std::uint32_t q = 1;
    for (unsigned i = 0; i < e; ++i) q *= p;
    PolyMod prod = mul_pruned(g, fp1, static_cast<int>(q), threads);
    if (e == 1) return !prod.is_zero();
    auto pieces = digit_split(prod, p);
    std::vector<PolyMod> rows;
    rows.reserve(pieces.size());
    for (auto& [digit, piece] : pieces) rows.push_back(std::move(piece));
    for (const auto& b : linear_span_basis(std::move(rows)))
        if (survives_rec(e - 1, b, fp1, p, threads)) return true;
    return false;
}

/// Witness-producing variant: depth-first over the digit pieces themselves
/// (no span reduction), reassembling the surviving monomial from the digit
/// chain. Failed pieces are memoized per level; `budget` caps the number of
/// piece expansions so hard instances fall back to the witness-free test.
struct WitnessSearch {
    const PolyMod& fp1;
    std::uint32_t p;
    int threads;
    long budget;
    std::vector<std::set<std::string>> failed; // per level

    std::optional<Monomial> run(unsigned e, const PolyMod& g) {
        if (e == 0)
            return g.constant_term() != 0 ? std::optional<Monomial>(Monomial::one(g.vars().count()))
                                          : std::nullopt;
        if (budget-- <= 0) return std::nullopt;
        std::uint32_t q = 1;
        for (unsigned i = 0; i < e; ++i) q *= p;
        PolyMod prod = mul_pruned(g, fp1, static_cast<int>(q), threads);
        if (e == 1) {
            if (prod.is_zero()) return std::nullopt;
            return prod.terms().front().first;
        }
        for (const auto& [digit, piece] : digit_split(prod, p)) {
            std::string key = terms_key(piece);
            if (failed[e - 1].contains(key)) continue;
            if (auto sub = run(e - 1, piece)) {
                // monomial = digit + p * (recursive witness)
                Monomial w(digit.nvars());
                for (std::size_t v = 0; v < w.nvars(); ++v)
                    w.set_exp(v, digit.exp(v) + p * sub->exp(v));
                return w;
            }
            failed[e - 1].insert(std::move(key));
        }
        return std::nullopt;
    }
};

} // namespace detail

/// Exact test for g * F^{q-1} not in m^[q], q = p^e <= 256. This agrees with
/// materializing the residue but stays feasible when the residue support is
/// enormous (large q on jet rings).
inline bool frobenius_survives(const JetSystem& sys, const PolyMod& g, std::uint32_t q,
                               int threads = 1) {
    unsigned e = frobenius_exponent(q, sys.p);
    g.require_compatible(PolyMod::zero(sys.vt, sys.p));
    PolyMod f = fedder_product(sys, static_cast<int>(q), threads);
    PolyMod fp1 = power_residue(f, sys.p - 1, static_cast<int>(q), threads);
    return detail::survives_rec(e, g, fp1, sys.p, threads);
}

/// Like frobenius_survives, but also tries to exhibit a surviving monomial
/// of g * F^{q-1} mod m^[q]. The witness search is budgeted; nullopt in the
/// second slot with `true` in the first means "survives, witness too deep".
inline std::pair<bool, std::optional<Monomial>> frobenius_survivor(const JetSystem& sys,
                                                                   const PolyMod& g,
                                                                   std::uint32_t q,
                                                                   int threads = 1,
                                                                   long witness_budget = 20000) {
    unsigned e = frobenius_exponent(q, sys.p);
    PolyMod f = fedder_product(sys, static_cast<int>(q), threads);
    PolyMod fp1 = power_residue(f, sys.p - 1, static_cast<int>(q), threads);
    if (!detail::survives_rec(e, g, fp1, sys.p, threads)) return {false, std::nullopt};
    detail::WitnessSearch search{fp1, sys.p, threads, witness_budget, {}};
    search.failed.resize(e);
    return {true, search.run(e, g)};
}

struct PurityResult {
    bool f_pure = false;
    std::optional<GoodMonomialCertificate> certificate;
};

/// Fedder-type F-purity at q = p: F-pure iff F^{p-1} survives m^[p]. When
/// F-pure, certifies the lexicographically least surviving monomial with
/// provenance from the extraction DP. The caller is responsible for the
/// complete-intersection hypothesis at the trivial jet.
inline PurityResult is_f_pure(const JetSystem& sys, int threads = 1) {
    PolyMod residue = fedder_residue(sys, sys.p, threads);
    if (residue.is_zero()) return {};

    PurityResult out;
    out.f_pure = true;

    GoodMonomialCertificate cert;
    cert.q = sys.p;
    cert.monomial = residue.terms().front().first;

    std::vector<FactorPower> factors;
    for (std::size_t l = 0; l < sys.equations.size(); ++l)
        for (int j = 0; j <= sys.level; ++j) {
            factors.push_back({&sys.equations[l][j], sys.p - 1});
            cert.factor_labels.emplace_back(static_cast<int>(l), j);
        }
    cert.coefficient = coefficient_of(cert.monomial, factors, &cert.provenance);
    out.certificate = std::move(cert);
    return out;
}

/// Re-derives everything the certificate claims: the monomial avoids m^[q],
/// the provenance terms multiply back to it, and the extraction DP
/// reproduces the certified nonzero coefficient.
inline bool revalidate(const GoodMonomialCertificate& cert, const JetSystem& sys) {
    if (cert.coefficient == 0 || !cert.monomial.outside_bracket(cert.q)) return false;

    std::vector<FactorPower> factors;
    if (cert.factor_labels.size() != cert.provenance.size()) return false;
    Monomial prod = Monomial::one(sys.vt.count());
    for (std::size_t i = 0; i < cert.factor_labels.size(); ++i) {
        auto [l, j] = cert.factor_labels[i];
        if (l < 0 || l >= static_cast<int>(sys.equations.size()) || j < 0 || j > sys.level)
            return false;
        const PolyMod& fac = sys.equations[l][j];
        factors.push_back({&fac, static_cast<unsigned>(cert.provenance[i].size())});
        for (const auto& pick : cert.provenance[i]) {
            if (fac.coeff_of(pick.monomial) != pick.coeff || pick.coeff == 0) return false;
            prod = prod.times(pick.monomial);
        }
    }
    if (!(prod == cert.monomial)) return false;
    return coefficient_of(cert.monomial, factors) == cert.coefficient;
}

/// Normal form of g under division by the single polynomial f vanishes
/// exactly when g is a polynomial multiple of f.
inline bool is_poly_multiple(const PolyMod& g, const PolyMod& f) {
    g.require_compatible(f);
    if (f.is_zero()) return g.is_zero();
    PolyMod rem = g;
    const auto& [lead_m, lead_c] = f.terms().back();
    std::uint32_t lead_inv = mod_inv(lead_c, f.p());
    while (!rem.is_zero()) {
        const auto& [top_m, top_c] = rem.terms().back();
        if (!lead_m.divides(top_m)) return false; // lands in the remainder
        std::uint32_t factor = mod_mul(top_c, lead_inv, rem.p());
        rem = rem.add(f.times_monomial(top_m.divided_by(lead_m), rem.p() - factor));
    }
    return true;
}

enum class RegularProbeVerdict { certified_for_g, inconclusive };

struct RegularProbeResult {
    RegularProbeVerdict verdict = RegularProbeVerdict::inconclusive;
    std::optional<unsigned> witness_e;
    std::optional<Monomial> witness_monomial;
    std::vector<int> headroom; // per variable: q - multiplicity in the witness
};

/// One-sided F-regularity probe: finds the least e <= e_max such that
/// g * F^{q-1} leaves m^[q], q = p^e. Inconclusive never certifies
/// non-regularity. For hypersurface systems, g being a polynomial multiple
/// of f is rejected up front; for r > 1 the caller owns the g-not-in-I
/// hypothesis.
inline RegularProbeResult f_regular_probe(const JetSystem& sys, const PolyMod& g,
                                          unsigned e_max, int threads = 1) {
    if (g.is_zero()) throw PreconditionError("f_regular_probe: g must be nonzero");
    PolyMod lifted_g = g.vars() == sys.vt ? g : g.lifted(sys.vt);
    if (sys.base.size() == 1 && is_poly_multiple(lifted_g, sys.base[0]))
        throw PreconditionError("f_regular_probe: g is a polynomial multiple of the equation");

    RegularProbeResult out;
    std::uint32_t q = 1;
    for (unsigned e = 1; e <= e_max; ++e) {
        q *= sys.p;
        if (q > 256) throw RangeError("f_regular_probe: p^e exceeds the supported range 256");
        auto [alive, witness] = frobenius_survivor(sys, lifted_g, q, threads);
        if (!alive) continue;
        out.verdict = RegularProbeVerdict::certified_for_g;
        out.witness_e = e;
        out.witness_monomial = witness;
        if (witness) {
            out.headroom.resize(sys.vt.count());
            for (std::size_t v = 0; v < sys.vt.count(); ++v)
                out.headroom[v] = static_cast<int>(q) - witness->exp(v);
        }
        return out;
    }
    return out;
}

/// The default probe panel: every variable, then every nonzero partial
/// derivative of every equation, deduplicated, skipping polynomial
/// multiples of a hypersurface equation.
inline std::vector<PolyMod> default_g_panel(const JetSystem& sys) {
    std::vector<PolyMod> panel;
    std::set<std::string> seen;
    auto push = [&](PolyMod g) {
        if (g.is_zero()) return;
        if (sys.base.size() == 1 && is_poly_multiple(g, sys.base[0])) return;
        if (seen.insert(serialize_poly(g)).second) panel.push_back(std::move(g));
    };
    for (std::size_t v = 0; v < sys.vt.count(); ++v)
        push(PolyMod::variable(sys.vt, sys.p, v));
    for (const auto* eq : sys.all_equations())
        for (std::size_t v = 0; v < sys.vt.count(); ++v) push(eq->derivative(v));
    return panel;
}

} // namespace jetfpt
