#pragma once

#include <vector>

#include "jetfpt/jet.hpp"

namespace jetfpt {

enum class JetVerdict { irreducible_complete_intersection, not_irreducible, inconclusive };

/// Dimension and irreducibility bookkeeping for the m-jet scheme of a
/// homogeneous hypersurface with an isolated singularity at the origin.
/// The hypothesis flags are caller-asserted; a false flag forces an
/// inconclusive verdict.
struct JetGeometryReport {
    int d = 0, n = 0, m = 0;
    long fiber_dim = 0;             // dim of the fiber over the origin
    bool fiber_dim_is_lower_bound = false; // true in the d >= N regime
    long threshold = 0;             // (m+1)(N-1)
    JetVerdict verdict = JetVerdict::inconclusive;
    bool homogeneous = false, isolated_singularity = false;
};

/// Closed form for dim of the origin fiber when d <= N-1: the whole
/// A^{mN} for m <= d-1, and (m-d+1)(N-1) + (d-1)N once m >= d (the fiber
/// splits off a level-(m-d) jet scheme times an affine factor).
inline long fiber_dimension(int d, int n, int m) {
    if (d < 1 || n < 1 || m < 0) throw PreconditionError("fiber_dimension: bad parameters");
    if (d >= n)
        throw PreconditionError(
            "fiber_dimension: the closed form needs d <= N-1; use irreducibility_verdict");
    if (m <= d - 1) return static_cast<long>(m) * n;
    return static_cast<long>(m - d + 1) * (n - 1) + static_cast<long>(d - 1) * n;
}

inline JetGeometryReport irreducibility_verdict(int d, int n, int m, bool homogeneous,
                                                bool isolated_singularity) {
    if (d < 1 || n < 1 || m < 0) throw PreconditionError("irreducibility_verdict: bad parameters");
    JetGeometryReport rep;
    rep.d = d;
    rep.n = n;
    rep.m = m;
    rep.homogeneous = homogeneous;
    rep.isolated_singularity = isolated_singularity;
    rep.threshold = static_cast<long>(m + 1) * (n - 1);
    if (d <= n - 1) {
        rep.fiber_dim = fiber_dimension(d, n, m);
    } else {
        // only the lower bound mN - max{0, m+1-d} is available here
        rep.fiber_dim = static_cast<long>(m) * n - std::max(0, m + 1 - d);
        rep.fiber_dim_is_lower_bound = true;
    }
    if (!homogeneous || !isolated_singularity) {
        rep.verdict = JetVerdict::inconclusive;
    } else if (d <= n - 1) {
        rep.verdict = JetVerdict::irreducible_complete_intersection;
    } else if (m >= n - 1) {
        rep.verdict = JetVerdict::not_irreducible;
    } else {
        rep.verdict = JetVerdict::inconclusive;
    }
    return rep;
}

struct FiberCheckRow {
    int equation = 0;
    int j = 0;
    bool vanish_row = false; // true: checked F^(j)|_{x^(0)=0} = 0 (j < d)
    bool holds = false;
};

/// Equation-level content of the fiber decomposition: at x^(0) = 0 the
/// first d equations vanish identically and the rest reproduce the
/// level-(m-d) system after the weight shift.
inline std::vector<FiberCheckRow> shift_fiber_check(const JetSystem& sys) {
    std::vector<FiberCheckRow> rows;
    for (std::size_t l = 0; l < sys.base.size(); ++l) {
        if (!sys.degrees[l])
            throw PreconditionError("shift_fiber_check: base polynomial is not homogeneous");
        int d = *sys.degrees[l];
        if (sys.level < d)
            throw PreconditionError("shift_fiber_check: requires jet level m >= degree d");
        for (int j = 0; j < d; ++j)
            rows.push_back({static_cast<int>(l), j, true,
                            kill_weight0(sys.equations[l][j]).is_zero()});
    }
    for (const auto& row : shift_identity_check(sys))
        rows.push_back({row.equation, row.j, false, row.holds});
    return rows;
}

} // namespace jetfpt
