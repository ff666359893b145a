#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jetfpt/frobenius.hpp"
#include "jetfpt/jet.hpp"
#include "jetfpt/rational.hpp"

namespace jetfpt {

struct FptRow {
    unsigned e = 0;
    std::uint32_t q = 0;
    std::optional<long> r_q;       // absent when F^{q-1} falls into m^[q]
    std::optional<Rational> ratio; // r_q / q, exact
};

struct FptTable {
    std::vector<std::size_t> center; // flat indices of the generating variables
    std::vector<FptRow> rows;
};

namespace detail {

/// S-degree of a monomial: total exponent over the center variables.
inline long s_degree(const Monomial& m, std::span<const std::size_t> center) {
    long s = 0;
    for (auto v : center) s += m.exp(v);
    return s;
}

/// When every term of an equation has the same S-degree, returns it.
inline std::optional<long> graded_s_degree(const PolyMod& f,
                                           std::span<const std::size_t> center) {
    if (f.is_zero()) return std::nullopt;
    long s = s_degree(f.terms().front().first, center);
    for (const auto& [m, c] : f.terms())
        if (s_degree(m, center) != s) return std::nullopt;
    return s;
}

} // namespace detail

/// r_q = max{ s : I^s F^{q-1} not contained in m^[q] } for the monomial ideal
/// I generated by the center variables. Equals the best packing headroom
/// max over residue monomials x of sum_{v in S} (q-1-exp_x(v)); absent when
/// the residue vanishes.
///
/// When every equation is S-degree homogeneous, every residue monomial has
/// the same S-degree (q-1) * sum sigma_l, so the max is forced and only the
/// survival of F^{q-1} needs deciding; that path avoids materializing the
/// residue and keeps large q feasible. Otherwise the residue is materialized
/// and scanned.
inline std::optional<long> fpt_r_q(const JetSystem& sys, std::span<const std::size_t> center,
                                   std::uint32_t q, int threads = 1) {
    if (center.empty()) throw PreconditionError("fpt_r_q: the center needs at least one variable");
    frobenius_exponent(q, sys.p);
    for (auto v : center)
        if (v >= sys.vt.count()) throw StructureError("fpt_r_q: center variable out of range");

    long graded_total = 0;
    bool graded = true;
    for (const auto* eq : sys.all_equations()) {
        auto s = detail::graded_s_degree(*eq, center);
        if (!s) { graded = false; break; }
        graded_total += *s;
    }

    if (graded) {
        PolyMod one = PolyMod::constant(sys.vt, sys.p, 1);
        if (!frobenius_survives(sys, one, q, threads)) return std::nullopt;
        return static_cast<long>(q - 1) *
               (static_cast<long>(center.size()) - graded_total);
    }

    PolyMod residue = fedder_residue(sys, q, threads);
    if (residue.is_zero()) return std::nullopt;
    long best = -1;
    for (const auto& [m, c] : residue.terms()) {
        long head = 0;
        for (auto v : center) head += static_cast<long>(q - 1) - m.exp(v);
        best = std::max(best, head);
    }
    return best;
}

/// Finite-q approximants of the F-pure threshold along e = 1..e_max.
inline FptTable fpt_sequence(const JetSystem& sys, std::span<const std::size_t> center,
                             unsigned e_max, int threads = 1) {
    FptTable table;
    table.center.assign(center.begin(), center.end());
    std::uint32_t q = 1;
    for (unsigned e = 1; e <= e_max; ++e) {
        q *= sys.p;
        if (q > 256) throw RangeError("fpt_sequence: p^e exceeds the supported range 256");
        FptRow row;
        row.e = e;
        row.q = q;
        row.r_q = fpt_r_q(sys, center, q, threads);
        if (row.r_q) row.ratio = Rational(*row.r_q, q);
        table.rows.push_back(std::move(row));
    }
    return table;
}

struct FptCompareRow {
    unsigned e = 0;
    std::uint32_t q = 0;
    std::optional<long> r_q;       // level m, center 0_m
    std::optional<long> r_prime_q; // level m', center psi^{-1}(0_m)
    std::optional<bool> inequality_holds; // r'_q + (q-1) * sum(ord_l - 1) <= r_q
    std::optional<Rational> ratio_gap;    // r_q/q - r'_q/q
};

struct FptCompareReport {
    int m = 0;
    int m_prime = 0;
    long order_excess = 0; // sum_l (ord f_l - 1)
    std::vector<FptCompareRow> rows;
};

/// The finite-q content of the smoothness comparison: r_q at level m with
/// the full trivial-jet center against r'_q at level m' with the pulled-back
/// center, checked against r'_q + (q-1) * sum_l (ord f_l - 1) <= r_q.
inline FptCompareReport jet_fpt_compare(const std::vector<PolyMod>& f_list, int m, int m_prime,
                                        unsigned e_max, int threads = 1) {
    if (m < 0 || m_prime <= m)
        throw PreconditionError("jet_fpt_compare: need 0 <= m < m'");

    JetSystem low = jet_equations(f_list, m);
    JetSystem high = jet_equations(f_list, m_prime);

    FptCompareReport report;
    report.m = m;
    report.m_prime = m_prime;
    for (const auto& f : low.base) {
        int ord = f.order_at_origin();
        if (ord < 1)
            throw PreconditionError("jet_fpt_compare: every equation must vanish at the origin");
        report.order_excess += ord - 1;
    }

    std::vector<std::size_t> center_low = trivial_jet_variables(low, m);
    std::vector<std::size_t> center_high = trivial_jet_variables(high, m);

    std::uint32_t q = 1;
    for (unsigned e = 1; e <= e_max; ++e) {
        q *= low.p;
        if (q > 256) throw RangeError("jet_fpt_compare: p^e exceeds the supported range 256");
        FptCompareRow row;
        row.e = e;
        row.q = q;
        row.r_q = fpt_r_q(low, center_low, q, threads);
        row.r_prime_q = fpt_r_q(high, center_high, q, threads);
        if (row.r_q && row.r_prime_q) {
            row.inequality_holds =
                *row.r_prime_q + static_cast<long>(q - 1) * report.order_excess <= *row.r_q;
            row.ratio_gap = Rational(*row.r_q - *row.r_prime_q, q);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace jetfpt
