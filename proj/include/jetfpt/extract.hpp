#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "jetfpt/poly.hpp"

namespace jetfpt {

struct FactorPower {
    const PolyMod* poly;
    unsigned multiplicity;
};

struct TermPick {
    Monomial monomial;
    std::uint32_t coeff;
};

/// One term selected from every factor copy; the picks multiply out to the
/// extraction target. picks[i] has factors[i].multiplicity entries.
using Provenance = std::vector<std::vector<TermPick>>;

namespace detail {

struct ExtractionDP {
    std::uint32_t p;
    // restricted[i]: terms of factor i dividing the target
    std::vector<std::vector<PolyMod::Term>> restricted;
    std::vector<std::size_t> copy_factor; // copy index -> factor index
    // degree window reachable by copies [c, K): for cheap infeasibility cuts
    std::vector<int> suffix_min_deg, suffix_max_deg;
    std::vector<std::unordered_map<Monomial, std::uint32_t, MonomialHash>> memo;

    std::uint32_t coeff(std::size_t c, const Monomial& budget) {
        if (c == copy_factor.size()) return budget.is_one() ? 1u : 0u;
        int deg = budget.degree();
        if (deg < suffix_min_deg[c] || deg > suffix_max_deg[c]) return 0u;
        auto it = memo[c].find(budget);
        if (it != memo[c].end()) return it->second;
        std::uint32_t total = 0;
        for (const auto& [m, coef] : restricted[copy_factor[c]]) {
            if (!m.divides(budget)) continue;
            std::uint32_t sub = coeff(c + 1, budget.divided_by(m));
            if (sub) total = mod_add(total, mod_mul(coef, sub, p), p);
        }
        memo[c].emplace(budget, total);
        return total;
    }
};

} // namespace detail

/// Coefficient of `target` in prod_i factors[i].poly ^ multiplicity, without
/// expanding the product: each factor is restricted to the terms dividing
/// the target and a dynamic program runs over the remaining exponent budget.
///
/// When the coefficient is nonzero and `provenance` is non-null, it receives
/// one explicit choice of a term from each factor copy whose product equals
/// the target (picked greedily in canonical term order).
inline std::uint32_t coefficient_of(const Monomial& target,
                                    std::span<const FactorPower> factors,
                                    Provenance* provenance = nullptr) {
    if (factors.empty()) return target.is_one() ? 1u : 0u;

    const PolyMod& first = *factors.front().poly;
    detail::ExtractionDP dp;
    dp.p = first.p();

    for (const auto& [poly, mult] : factors) {
        poly->require_compatible(first);
        std::vector<PolyMod::Term> r;
        for (const auto& t : poly->terms())
            if (t.first.divides(target)) r.push_back(t);
        dp.restricted.push_back(std::move(r));
        for (unsigned k = 0; k < mult; ++k)
            dp.copy_factor.push_back(dp.restricted.size() - 1);
    }
    if (target.nvars() != first.vars().count())
        throw StructureError("coefficient_of: target width does not match the factors");

    const std::size_t copies = dp.copy_factor.size();
    dp.suffix_min_deg.assign(copies + 1, 0);
    dp.suffix_max_deg.assign(copies + 1, 0);
    for (std::size_t c = copies; c-- > 0;) {
        const auto& terms = dp.restricted[dp.copy_factor[c]];
        int lo = terms.empty() ? 1 << 20 : terms.front().first.degree();
        int hi = 0;
        for (const auto& [m, coef] : terms) {
            lo = std::min(lo, m.degree());
            hi = std::max(hi, m.degree());
        }
        dp.suffix_min_deg[c] = dp.suffix_min_deg[c + 1] + lo;
        dp.suffix_max_deg[c] = dp.suffix_max_deg[c + 1] + hi;
    }
    dp.memo.resize(copies);

    std::uint32_t result = dp.coeff(0, target);

    if (result != 0 && provenance) {
        provenance->assign(factors.size(), {});
        Monomial budget = target;
        for (std::size_t c = 0; c < copies; ++c) {
            bool picked = false;
            for (const auto& [m, coef] : dp.restricted[dp.copy_factor[c]]) {
                if (!m.divides(budget)) continue;
                Monomial rest = budget.divided_by(m);
                if (dp.coeff(c + 1, rest) != 0) {
                    (*provenance)[dp.copy_factor[c]].push_back({m, coef});
                    budget = std::move(rest);
                    picked = true;
                    break;
                }
            }
            if (!picked) throw StructureError("coefficient_of: provenance walk lost the budget");
        }
    }
    return result;
}

inline std::uint32_t coefficient_of(const Monomial& target,
                                    std::initializer_list<FactorPower> factors,
                                    Provenance* provenance = nullptr) {
    return coefficient_of(target, std::span<const FactorPower>(factors.begin(), factors.size()),
                          provenance);
}

} // namespace jetfpt
