#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jetfpt/extract.hpp"
#include "jetfpt/frobenius.hpp"
#include "jetfpt/jet.hpp"
#include "jetfpt/rational.hpp"
#include "jetfpt/simplex.hpp"

namespace jetfpt {

// ---------------------------------------------------------------------------
// Exponent decomposition and multinomial valuation
// ---------------------------------------------------------------------------

/// q - 1 = (p^e - p^{e-1}) + (p^{e-1} - p^{e-2}) + (p^{e-2} - 1).
struct ExponentDecomposition {
    std::uint32_t p = 0;
    unsigned e = 0;
    long long a = 0, b = 0, c = 0;

    long long q_minus_1() const { return a + b + c; }
};

inline ExponentDecomposition decompose_exponent(std::uint32_t p, unsigned e) {
    if (!is_prime(p)) throw StructureError("decompose_exponent: p must be prime");
    if (e < 2) throw PreconditionError("decompose_exponent: requires e >= 2");
    long long pe2 = 1;
    for (unsigned i = 0; i + 2 < e; ++i) pe2 *= p; // p^{e-2}
    long long pe1 = pe2 * p, pe = pe1 * p;
    ExponentDecomposition d{p, e, pe - pe1, pe1 - pe2, pe2 - 1};
    if (d.a + d.b + d.c != pe - 1 || d.a < d.b || d.b <= d.c || d.c < 0)
        throw StructureError("decompose_exponent: invariant failure");
    return d;
}

/// p-adic valuation of the multinomial (sum parts)! / prod parts!, counted
/// as base-p carries when adding the parts: (sum of digit sums of the parts
/// minus the digit sum of the total) / (p - 1).
inline unsigned long long multinomial_p_valuation(std::span<const unsigned long long> parts,
                                                  std::uint32_t p) {
    if (parts.empty()) throw PreconditionError("multinomial_p_valuation: no parts");
    auto digit_sum = [p](unsigned long long n) {
        unsigned long long s = 0;
        for (; n; n /= p) s += n % p;
        return s;
    };
    unsigned long long total = 0, sum_digits = 0;
    for (auto part : parts) {
        total += part;
        sum_digits += digit_sum(part);
    }
    return (sum_digits - digit_sum(total)) / (p - 1);
}

inline unsigned long long multinomial_p_valuation(std::initializer_list<unsigned long long> parts,
                                                  std::uint32_t p) {
    return multinomial_p_valuation(std::span<const unsigned long long>(parts.begin(), parts.size()),
                                   p);
}

// ---------------------------------------------------------------------------
// L-monomials and the M-monomial
// ---------------------------------------------------------------------------

/// One term choice L_k(j) from F^(j): jet monomial, the index tuple of the
/// seeded coefficient it rides on, and the integer combinatorial factor.
struct LTermChoice {
    int j = 0;
    Monomial term;                  // over VarTable(N, m)
    std::vector<int> xi_tuple;      // nondecreasing base-variable indices
    long long integer_factor = 1;   // 1 for L1; d for L2/L3 rows with j >= 1
};

struct LMonomialSet {
    int d = 0, n = 0, m = 0;
    std::vector<LTermChoice> l1, l2, l3;       // rows j = 0..m
    std::vector<long long> exp1, exp2, exp3;   // combined exponent vectors
};

namespace detail {

inline std::vector<long long> combined_exponents(const std::vector<LTermChoice>& rows,
                                                 std::size_t nvars) {
    std::vector<long long> e(nvars, 0);
    for (const auto& row : rows)
        for (std::size_t v = 0; v < nvars; ++v) e[v] += row.term.exp(v);
    return e;
}

} // namespace detail

/// The three term systems of the good-monomial construction for a general
/// type form of degree d in N >= d^2 variables at jet level m.
///
/// L1(j), for j = s*d + t with 0 <= t < d, walks the t-th block of d
/// consecutive base variables, taking the first d-t of them at weight s and
/// the last t at weight s+1 -- so no variable repeats anywhere in L1. L2
/// rides the single variable x_{2d} (degree-d power at j=0, then
/// (x_{2d}^(0))^{d-1} x_{2d}^(j)), and L3 does the same on x_d.
inline LMonomialSet build_l_monomials(int d, int n, int m) {
    if (d < 2) throw PreconditionError("build_l_monomials: requires d >= 2");
    if (m < 0) throw PreconditionError("build_l_monomials: requires m >= 0");
    if (static_cast<long long>(d) * d > n)
        throw PreconditionError("build_l_monomials: the construction consumes d^2 distinct "
                                "variables, need d^2 <= N");

    VarTable vt(n, m);
    LMonomialSet set;
    set.d = d;
    set.n = n;
    set.m = m;

    for (int j = 0; j <= m; ++j) {
        const int s = j / d, t = j % d;
        LTermChoice row;
        row.j = j;
        row.term = Monomial(vt.count());
        for (int k = 1; k <= d; ++k) {
            int base = t * d + k;
            int weight = k <= d - t ? s : s + 1;
            row.xi_tuple.push_back(base);
            std::size_t v = vt.flat(base, weight);
            row.term.set_exp(v, row.term.exp(v) + 1);
        }
        set.l1.push_back(std::move(row));
    }

    auto power_rows = [&](int var) {
        std::vector<LTermChoice> rows;
        for (int j = 0; j <= m; ++j) {
            LTermChoice row;
            row.j = j;
            row.xi_tuple.assign(d, var);
            row.term = Monomial(vt.count());
            if (j == 0) {
                row.term.set_exp(vt.flat(var, 0), d);
            } else {
                row.term.set_exp(vt.flat(var, 0), d - 1);
                row.term.set_exp(vt.flat(var, j), row.term.exp(vt.flat(var, j)) + 1);
                row.integer_factor = d;
            }
            rows.push_back(std::move(row));
        }
        return rows;
    };
    set.l2 = power_rows(2 * d);
    set.l3 = power_rows(d);

    // construction invariants: degree d and weight j per row, plus the
    // multiplicity profile the headroom bounds rest on
    for (const auto* rows : {&set.l1, &set.l2, &set.l3})
        for (const auto& row : *rows)
            if (row.term.degree() != d || row.term.weight(vt) != row.j)
                throw StructureError("build_l_monomials: degree/weight invariant failure");
    set.exp1 = detail::combined_exponents(set.l1, vt.count());
    set.exp2 = detail::combined_exponents(set.l2, vt.count());
    set.exp3 = detail::combined_exponents(set.l3, vt.count());
    for (auto e : set.exp1)
        if (e > 1) throw StructureError("build_l_monomials: a variable repeats in L1");
    const long long heavy = static_cast<long long>(m) * (d - 1) + d;
    for (std::size_t v = 0; v < vt.count(); ++v) {
        long long e2 = set.exp2[v], e3 = set.exp3[v];
        bool is_heavy2 = v == vt.flat(2 * d, 0), is_heavy3 = v == vt.flat(d, 0);
        if (is_heavy2 ? e2 != heavy : e2 > 1)
            throw StructureError("build_l_monomials: L2 multiplicity invariant failure");
        if (is_heavy3 ? e3 != heavy : e3 > 1)
            throw StructureError("build_l_monomials: L3 multiplicity invariant failure");
    }
    return set;
}

/// M = L1^a L2^b L3^c together with the multiplicity bounds that witness
/// M avoiding m^[q].
struct MMonomialReport {
    int d = 0, n = 0, m = 0;
    ExponentDecomposition dec;
    long long q = 0;
    std::vector<long long> exponents;    // over VarTable(n, m)
    long long max_weight0 = 0;           // largest weight-0 multiplicity
    long long max_positive = 0;          // largest positive-weight multiplicity
    long long bound_weight0 = 0;         // max{ b(md-m+d), a + c(md-m+d) }
    long long bound_positive = 0;        // a + b
    bool outside_bracket = false;        // all exponents < q
    std::optional<Monomial> packed;      // available when q <= 256
};

inline MMonomialReport build_m_monomial(int d, int n, int m, std::uint32_t p, unsigned e) {
    if (static_cast<long long>(p) <= static_cast<long long>(m) * (d - 1) + d)
        throw PreconditionError("build_m_monomial: requires p > m(d-1) + d");
    MMonomialReport rep;
    rep.d = d;
    rep.n = n;
    rep.m = m;
    rep.dec = decompose_exponent(p, e); // rejects e < 2
    rep.q = rep.dec.q_minus_1() + 1;

    LMonomialSet set = build_l_monomials(d, n, m);
    VarTable vt(n, m);
    rep.exponents.assign(vt.count(), 0);
    for (std::size_t v = 0; v < vt.count(); ++v)
        rep.exponents[v] = rep.dec.a * set.exp1[v] + rep.dec.b * set.exp2[v] +
                           rep.dec.c * set.exp3[v];

    for (std::size_t v = 0; v < vt.count(); ++v) {
        auto& slot = vt.weight(v) == 0 ? rep.max_weight0 : rep.max_positive;
        slot = std::max(slot, rep.exponents[v]);
    }
    const long long heavy = static_cast<long long>(m) * (d - 1) + d;
    rep.bound_weight0 = std::max(rep.dec.b * heavy, rep.dec.a + rep.dec.c * heavy);
    rep.bound_positive = rep.dec.a + rep.dec.b;
    rep.outside_bracket = true;
    for (auto exp : rep.exponents)
        if (exp >= rep.q) rep.outside_bracket = false;
    if (rep.max_weight0 > rep.bound_weight0 || rep.max_positive > rep.bound_positive)
        throw StructureError("build_m_monomial: multiplicity exceeds its bound");
    if (rep.bound_weight0 < rep.q && rep.bound_positive < rep.q && !rep.outside_bracket)
        throw StructureError("build_m_monomial: bracket check contradicts the bounds");

    if (rep.q <= 256) {
        Monomial packed(vt.count());
        for (std::size_t v = 0; v < vt.count(); ++v)
            packed.set_exp(v, static_cast<unsigned>(rep.exponents[v]));
        rep.packed = std::move(packed);
    }
    return rep;
}

/// Extraction-DP check that M carries a nonzero coefficient in F^{q-1} for a
/// concrete (seeded) coefficient assignment: the genericity claim is only
/// testable per seed.
inline std::uint32_t verify_m_membership(const PolyMod& f, const MMonomialReport& rep,
                                         int /*threads*/ = 1) {
    if (!rep.packed)
        throw RangeError("verify_m_membership: q exceeds the supported range 256");
    auto deg = f.homogeneous_degree();
    if (!deg || *deg != rep.d || f.vars().base_vars != rep.n)
        throw PreconditionError("verify_m_membership: polynomial does not match the construction");
    JetSystem sys = jet_equations(f, rep.m);
    std::vector<FactorPower> factors;
    for (int j = 0; j <= rep.m; ++j)
        factors.push_back({&sys.equations[0][j], static_cast<unsigned>(rep.q - 1)});
    return coefficient_of(*rep.packed, factors);
}

// ---------------------------------------------------------------------------
// Exponent matrices
// ---------------------------------------------------------------------------

struct ExponentMatrix {
    enum class Role { a_extracted, c_reference };
    Role role = Role::c_reference;
    int size = 0; // (m+1) x (m+1)
    std::vector<std::vector<Rational>> entries;
    std::vector<Rational> row_sums;          // alpha_i
    std::vector<Rational> col_sums;
    std::vector<Rational> weighted_col_sums; // sum_i i * a_ij
    std::vector<Rational> gamma;             // row sums, role C naming

    void finish_sums() {
        row_sums.assign(size, Rational(0));
        col_sums.assign(size, Rational(0));
        weighted_col_sums.assign(size, Rational(0));
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) {
                row_sums[i] += entries[i][j];
                col_sums[j] += entries[i][j];
                weighted_col_sums[j] += Rational(i) * entries[i][j];
            }
    }
};

/// The reference matrix: c_ij = d - u when j = d*i +- u with 0 <= u < d,
/// else 0, truncated to (m+1) x (m+1).
inline ExponentMatrix matrix_C(int d, int m) {
    if (d < 1 || m < 0) throw PreconditionError("matrix_C: requires d >= 1 and m >= 0");
    ExponentMatrix mat;
    mat.role = ExponentMatrix::Role::c_reference;
    mat.size = m + 1;
    mat.entries.assign(mat.size, std::vector<Rational>(mat.size, Rational(0)));
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            long long u = std::llabs(static_cast<long long>(j) - static_cast<long long>(d) * i);
            if (u < d) mat.entries[i][j] = d - u;
        }
    mat.finish_sums();
    mat.gamma = mat.row_sums;
    return mat;
}

struct MatrixConditionReport {
    bool upper_triangular = false;    // (1)
    bool col_sums_equal_d = false;    // (2)
    bool weighted_sums_equal_j = false; // (3)
    bool row_sums_at_most_n = true;   // (4); meaningful for extracted matrices
};

inline MatrixConditionReport check_conditions(const ExponentMatrix& mat, int d,
                                              std::optional<int> n = std::nullopt) {
    MatrixConditionReport rep;
    rep.upper_triangular = true;
    for (int i = 0; i < mat.size; ++i)
        for (int j = 0; j < i; ++j)
            if (mat.entries[i][j] != 0) rep.upper_triangular = false;
    rep.col_sums_equal_d = true;
    rep.weighted_sums_equal_j = true;
    for (int j = 0; j < mat.size; ++j) {
        if (mat.col_sums[j] != d) rep.col_sums_equal_d = false;
        if (mat.weighted_col_sums[j] != j) rep.weighted_sums_equal_j = false;
    }
    if (n)
        for (int i = 0; i < mat.size; ++i)
            if (mat.row_sums[i] > *n) rep.row_sums_at_most_n = false;
    return rep;
}

struct MatrixAReport {
    ExponentMatrix matrix;
    MatrixConditionReport conditions;
    int d = 0;
};

/// Reads the exponent matrix off a good-monomial certificate at q = p:
/// x(j) is the contribution of (F^(j))^{p-1} recorded in the provenance,
/// a_ij = (total exponent of weight-i variables in x(j)) / (p-1).
inline MatrixAReport extract_matrix_A(const GoodMonomialCertificate& cert,
                                      const JetSystem& sys) {
    if (cert.provenance.empty())
        throw PreconditionError("extract_matrix_A: certificate has no provenance");
    if (sys.base.size() != 1)
        throw PreconditionError("extract_matrix_A: hypersurface systems only");
    if (cert.q != sys.p)
        throw PreconditionError("extract_matrix_A: the extraction lives at q = p");

    MatrixAReport rep;
    rep.matrix.role = ExponentMatrix::Role::a_extracted;
    rep.matrix.size = sys.level + 1;
    rep.matrix.entries.assign(rep.matrix.size,
                              std::vector<Rational>(rep.matrix.size, Rational(0)));
    for (std::size_t fi = 0; fi < cert.factor_labels.size(); ++fi) {
        int j = cert.factor_labels[fi].second;
        for (const auto& pick : cert.provenance[fi])
            for (std::size_t v = 0; v < sys.vt.count(); ++v)
                if (unsigned exp = pick.monomial.exp(v); exp)
                    rep.matrix.entries[sys.vt.weight(v)][j] +=
                        Rational(exp, sys.p - 1);
    }
    rep.matrix.finish_sums();
    rep.d = sys.degree().value_or(-1);
    int d_for_check = rep.d >= 0
                          ? rep.d
                          : static_cast<int>(boost::multiprecision::numerator(
                                rep.matrix.col_sums[0]));
    rep.conditions = check_conditions(rep.matrix, d_for_check, sys.n);
    return rep;
}

// ---------------------------------------------------------------------------
// The min-max row sum program
// ---------------------------------------------------------------------------

struct MinMaxRowSumResult {
    Rational optimum;
    std::vector<std::vector<Rational>> witness; // an optimal (m+1) x (m+1) matrix
};

/// min t over real matrices a >= 0 with a_ij = 0 for i > j, column sums d,
/// weighted column sums j, and every row sum <= t. Exact simplex optimum.
inline MinMaxRowSumResult lp_min_max_rowsum(int d, int m) {
    if (d < 1 || m < 0) throw PreconditionError("lp_min_max_rowsum: requires d >= 1, m >= 0");
    if (static_cast<long long>(m + 1) * (m + 1) > 2500)
        throw RangeError("lp_min_max_rowsum: instance exceeds the desk-scale simplex limit");

    const int size = m + 1;
    // variables: a_ij for 0 <= i <= j <= m (packed), then t
    std::vector<std::vector<int>> var_of(size, std::vector<int>(size, -1));
    int nvars = 0;
    for (int j = 0; j < size; ++j)
        for (int i = 0; i <= j; ++i) var_of[i][j] = nvars++;
    const int t_var = nvars++;

    SimplexSolver lp(nvars);
    for (int j = 0; j < size; ++j) {
        std::vector<Rational> sum(nvars, Rational(0)), wsum(nvars, Rational(0));
        for (int i = 0; i <= j; ++i) {
            sum[var_of[i][j]] = 1;
            wsum[var_of[i][j]] = i;
        }
        lp.add_constraint(std::move(sum), SimplexSolver::Rel::eq, Rational(d));
        lp.add_constraint(std::move(wsum), SimplexSolver::Rel::eq, Rational(j));
    }
    for (int i = 0; i < size; ++i) {
        std::vector<Rational> row(nvars, Rational(0));
        for (int j = i; j < size; ++j) row[var_of[i][j]] = 1;
        row[t_var] = -1;
        lp.add_constraint(std::move(row), SimplexSolver::Rel::le, Rational(0));
    }
    std::vector<Rational> objective(nvars, Rational(0));
    objective[t_var] = 1;
    auto sol = lp.minimize(std::move(objective));
    if (sol.status != SimplexSolver::Status::optimal)
        throw StructureError("lp_min_max_rowsum: the program is always feasible; solver failure");

    MinMaxRowSumResult res;
    res.optimum = sol.objective;
    res.witness.assign(size, std::vector<Rational>(size, Rational(0)));
    for (int j = 0; j < size; ++j)
        for (int i = 0; i <= j; ++i) res.witness[i][j] = sol.solution[var_of[i][j]];
    return res;
}

/// Companion search over matrices with entries in Z/(p-1) (the denominators
/// an extracted matrix can actually have). Depth-first over columns with
/// max-row-sum pruning; nullopt when the node budget runs out.
inline std::optional<Rational> grid_min_max_rowsum(int d, int m, std::uint32_t p,
                                                   long node_budget = 2000000) {
    if (p < 2) throw PreconditionError("grid_min_max_rowsum: requires p >= 2");
    const int size = m + 1;
    const long long unit = p - 1; // entries are multiples of 1/(p-1)

    // enumerate integer columns (b_0j..b_jj) with sum d*(p-1), weighted sum j*(p-1)
    std::vector<std::vector<std::vector<long long>>> columns(size);
    for (int j = 0; j < size; ++j) {
        std::vector<long long> cur(j + 1, 0);
        auto rec = [&](auto&& self, int i, long long sum_left, long long wsum_left) -> void {
            if (i == j) {
                // last entry forced by the remaining sum; check the weight
                if (wsum_left == static_cast<long long>(i) * sum_left) {
                    cur[i] = sum_left;
                    columns[j].push_back(cur);
                }
                return;
            }
            long long max_b = i ? std::min(sum_left, wsum_left / i) : sum_left;
            for (long long b = 0; b <= max_b; ++b) {
                cur[i] = b;
                self(self, i + 1, sum_left - b, wsum_left - static_cast<long long>(i) * b);
            }
        };
        rec(rec, 0, d * unit, static_cast<long long>(j) * unit);
        if (columns[j].empty()) return std::nullopt; // cannot happen for j <= m
    }

    std::vector<long long> row_acc(size, 0);
    long long best = -1;
    long nodes = 0;
    bool exhausted = false;
    auto dfs = [&](auto&& self, int j) -> void {
        if (exhausted) return;
        if (++nodes > node_budget) { exhausted = true; return; }
        if (j == size) {
            long long worst = 0;
            for (auto r : row_acc) worst = std::max(worst, r);
            if (best < 0 || worst < best) best = worst;
            return;
        }
        for (const auto& col : columns[j]) {
            long long worst = 0;
            for (int i = 0; i <= j; ++i) row_acc[i] += col[i];
            for (auto r : row_acc) worst = std::max(worst, r);
            if (best < 0 || worst < best) self(self, j + 1);
            for (int i = 0; i <= j; ++i) row_acc[i] -= col[i];
        }
    };
    dfs(dfs, 0);
    if (exhausted || best < 0) return std::nullopt;
    return Rational(best, unit);
}

} // namespace jetfpt
