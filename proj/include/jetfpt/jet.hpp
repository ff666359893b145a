#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jetfpt/poly.hpp"

namespace jetfpt {

/// Defining equations of the m-jet scheme of V(f_1, ..., f_r).
///
/// equations[l][j] is F_l^(j), the t^j coefficient of f_l evaluated on the
/// truncated series (sum_j x_i^(j) t^j); all of them live over the full
/// variable table VarTable(N, m). F_l^(j) is weight-homogeneous of weight j,
/// and when f_l is homogeneous of degree d, also degree-homogeneous.
struct JetSystem {
    std::uint32_t p = 0;
    int n = 0;     // base variables
    int level = 0; // m
    VarTable vt{1, 0};
    std::vector<PolyMod> base;                   // f_l, lifted to vt
    std::vector<std::vector<PolyMod>> equations; // [l][j] = F_l^(j)
    std::vector<std::optional<int>> degrees;     // homogeneous degree of f_l, if any

    std::size_t equation_count() const { return base.size() * (level + 1); }

    /// Homogeneous degree of a hypersurface system.
    std::optional<int> degree() const {
        return base.size() == 1 ? degrees[0] : std::nullopt;
    }

    /// All equations in a flat list, ordered by (l, j).
    std::vector<const PolyMod*> all_equations() const {
        std::vector<const PolyMod*> out;
        out.reserve(equation_count());
        for (const auto& row : equations)
            for (const auto& f : row) out.push_back(&f);
        return out;
    }
};

namespace detail {

using Series = std::vector<PolyMod>; // index = t-degree, truncated at level+1

inline Series series_constant(const VarTable& vt, std::uint32_t p, int len, long long c) {
    Series s(len, PolyMod::zero(vt, p));
    s[0] = PolyMod::constant(vt, p, c);
    return s;
}

inline Series series_mul(const Series& a, const Series& b, const VarTable& vt,
                         std::uint32_t p) {
    Series c(a.size(), PolyMod::zero(vt, p));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; i + j < c.size() && j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            c[i + j] = c[i + j].add(a[i].times(b[j]));
        }
    }
    return c;
}

inline Series series_pow(Series base, unsigned k, const VarTable& vt, std::uint32_t p) {
    Series r = series_constant(vt, p, static_cast<int>(base.size()), 1);
    while (k) {
        if (k & 1) r = series_mul(r, base, vt, p);
        k >>= 1;
        if (k) base = series_mul(base, base, vt, p);
    }
    return r;
}

} // namespace detail

/// Generates all F_l^(j) by substituting the truncated series with fresh
/// jet variables into each f_l and collecting t-coefficients.
inline JetSystem jet_equations(const std::vector<PolyMod>& f_list, int m) {
    if (f_list.empty()) throw PreconditionError("jet_equations: empty system");
    if (m < 0) throw PreconditionError("jet_equations: jet level must be >= 0");

    const std::uint32_t p = f_list.front().p();
    const int n = f_list.front().vars().base_vars;
    for (const auto& f : f_list) {
        if (f.p() != p || f.vars().base_vars != n)
            throw StructureError("jet_equations: mixed coefficient primes or variable counts");
        for (const auto& [mono, c] : f.terms())
            if (mono.weight(f.vars()) != 0)
                throw PreconditionError(
                    "jet_equations: input must be a polynomial in the base variables");
    }

    JetSystem sys;
    sys.p = p;
    sys.n = n;
    sys.level = m;
    sys.vt = VarTable(n, m);

    // x_i |-> sum_j x_i^(j) t^j, one series per base variable
    std::vector<detail::Series> subs(n);
    for (int i = 1; i <= n; ++i) {
        detail::Series s(m + 1, PolyMod::zero(sys.vt, p));
        for (int j = 0; j <= m; ++j)
            s[j] = PolyMod::variable(sys.vt, p, sys.vt.flat(i, j));
        subs[i - 1] = std::move(s);
    }

    for (const auto& f : f_list) {
        detail::Series acc(m + 1, PolyMod::zero(sys.vt, p));
        VarTable base_vt = f.vars();
        for (const auto& [mono, c] : f.terms()) {
            detail::Series term = detail::series_constant(sys.vt, p, m + 1, c);
            for (int i = 1; i <= n; ++i) {
                std::size_t v = base_vt.flat(i, 0);
                if (unsigned e = mono.exp(v); e)
                    term = detail::series_mul(
                        term, detail::series_pow(subs[i - 1], e, sys.vt, p), sys.vt, p);
            }
            for (int j = 0; j <= m; ++j) acc[j] = acc[j].add(term[j]);
        }
        sys.base.push_back(f.vars() == sys.vt ? f : f.lifted(sys.vt));
        sys.degrees.push_back(f.homogeneous_degree());
        sys.equations.push_back(std::move(acc));
    }
    return sys;
}

inline JetSystem jet_equations(const PolyMod& f, int m) {
    return jet_equations(std::vector<PolyMod>{f}, m);
}

/// Substitutes x^(0) = 0 and shifts every surviving variable's weight down
/// by one block: x_i^(s) -> x_i^(s-1).
inline PolyMod kill_weight0_and_shift(const PolyMod& f) {
    const VarTable& vt = f.vars();
    std::vector<int> image(vt.count(), -1);
    for (std::size_t v = 0; v < vt.count(); ++v)
        if (int j = vt.weight(v); j >= 1)
            image[v] = static_cast<int>(vt.flat(vt.base_index(v), j - 1));
    return f.remapped(vt, image);
}

/// Substitutes x^(0) = 0 without renaming.
inline PolyMod kill_weight0(const PolyMod& f) {
    const VarTable& vt = f.vars();
    std::vector<int> image(vt.count());
    for (std::size_t v = 0; v < vt.count(); ++v)
        image[v] = vt.weight(v) == 0 ? -1 : static_cast<int>(v);
    return f.remapped(vt, image);
}

struct ShiftIdentityRow {
    int equation; // l
    int j;
    bool holds;
};

/// Checks F_l^(j)(0, x^(1), ..., x^(j)) = F_l^(j-d)(x^(1), ..., x^(j-d+1))
/// after the weight-down renaming, for every homogeneous equation and every
/// j in [d, m]. Exact polynomial equality per row.
inline std::vector<ShiftIdentityRow> shift_identity_check(const JetSystem& sys) {
    std::vector<ShiftIdentityRow> rows;
    for (std::size_t l = 0; l < sys.base.size(); ++l) {
        if (!sys.degrees[l])
            throw PreconditionError("shift_identity_check: base polynomial is not homogeneous");
        int d = *sys.degrees[l];
        if (sys.level < d)
            throw PreconditionError("shift_identity_check: requires jet level m >= degree d");
        for (int j = d; j <= sys.level; ++j) {
            PolyMod shifted = kill_weight0_and_shift(sys.equations[l][j]);
            rows.push_back({static_cast<int>(l), j, shifted == sys.equations[l][j - d]});
        }
    }
    return rows;
}

/// Flat indices of all x_i^(j) with j <= up_to: the generators of the ideal
/// of psi^{-1}(0_{up_to}) inside the level-m ring (all of 0_m at up_to = m).
inline std::vector<std::size_t> trivial_jet_variables(const JetSystem& sys, int up_to) {
    if (up_to < 0 || up_to > sys.level)
        throw PreconditionError("trivial_jet_variables: level out of range");
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < sys.vt.count(); ++v)
        if (sys.vt.weight(v) <= up_to) out.push_back(v);
    return out;
}

} // namespace jetfpt
