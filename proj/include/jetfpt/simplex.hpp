#pragma once

#include <cstddef>
#include <vector>

#include "jetfpt/errors.hpp"
#include "jetfpt/rational.hpp"

namespace jetfpt {

/// Dense two-phase primal simplex over exact rationals with Bland's rule,
/// which guarantees termination. Minimizes c*x subject to the added
/// constraints and x >= 0. Desk-scale only: the tableau is dense.
class SimplexSolver {
public:
    enum class Rel { le, eq, ge };
    enum class Status { optimal, infeasible, unbounded };

    struct Result {
        Status status = Status::infeasible;
        Rational objective;
        std::vector<Rational> solution;
    };

    explicit SimplexSolver(std::size_t nvars) : n_(nvars) {}

    void add_constraint(std::vector<Rational> coeffs, Rel rel, Rational rhs) {
        if (coeffs.size() != n_) throw StructureError("simplex: bad constraint width");
        if (rhs < 0) {
            for (auto& c : coeffs) c = -c;
            rhs = -rhs;
            if (rel == Rel::le) rel = Rel::ge;
            else if (rel == Rel::ge) rel = Rel::le;
        }
        rows_.push_back({std::move(coeffs), rel, std::move(rhs)});
    }

    Result minimize(std::vector<Rational> objective) {
        if (objective.size() != n_) throw StructureError("simplex: bad objective width");
        build();

        // Phase 1: minimize the artificial total.
        std::vector<Rational> phase1(cols_, Rational(0));
        for (std::size_t j = art_begin_; j < cols_; ++j) phase1[j] = 1;
        load_objective(phase1);
        pivot_loop();
        if (obj_value() != 0) return {Status::infeasible, Rational(0), {}};
        purge_artificials();

        // Phase 2.
        std::vector<Rational> full(cols_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) full[j] = objective[j];
        load_objective(full);
        if (!pivot_loop()) return {Status::unbounded, Rational(0), {}};

        Result res;
        res.status = Status::optimal;
        res.objective = obj_value();
        res.solution.assign(n_, Rational(0));
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] < n_) res.solution[basis_[i]] = tab_[i].back();
        return res;
    }

private:
    struct Row {
        std::vector<Rational> coeffs;
        Rel rel;
        Rational rhs;
    };

    std::size_t n_;
    std::vector<Row> rows_;

    std::vector<std::vector<Rational>> tab_; // m rows, cols_ + 1 (rhs last)
    std::vector<Rational> obj_;              // cols_ + 1
    std::vector<std::size_t> basis_;
    std::vector<bool> dead_col_;
    std::size_t cols_ = 0, art_begin_ = 0;

    void build() {
        std::size_t slacks = 0, arts = 0, surplus = 0;
        for (const auto& r : rows_) {
            if (r.rel == Rel::le) ++slacks;
            else ++arts; // eq and ge rows start on an artificial
            if (r.rel == Rel::ge) ++surplus;
        }

        cols_ = n_ + slacks + surplus + arts;
        art_begin_ = n_ + slacks + surplus;
        tab_.assign(rows_.size(), std::vector<Rational>(cols_ + 1, Rational(0)));
        basis_.assign(rows_.size(), 0);
        dead_col_.assign(cols_, false);

        std::size_t slack_at = n_, surplus_at = n_ + slacks, art_at = art_begin_;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            auto& row = tab_[i];
            for (std::size_t j = 0; j < n_; ++j) row[j] = rows_[i].coeffs[j];
            row.back() = rows_[i].rhs;
            switch (rows_[i].rel) {
            case Rel::le:
                row[slack_at] = 1;
                basis_[i] = slack_at++;
                break;
            case Rel::ge:
                row[surplus_at] = -1;
                ++surplus_at;
                row[art_at] = 1;
                basis_[i] = art_at++;
                break;
            case Rel::eq:
                row[art_at] = 1;
                basis_[i] = art_at++;
                break;
            }
        }
    }

    void load_objective(const std::vector<Rational>& cost) {
        obj_.assign(cols_ + 1, Rational(0));
        for (std::size_t j = 0; j < cols_; ++j) obj_[j] = cost[j];
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const Rational& c = cost[basis_[i]];
            if (c == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= c * tab_[i][j];
        }
    }

    Rational obj_value() const { return -obj_.back(); }

    /// Returns false on unboundedness.
    bool pivot_loop() {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) // Bland: smallest index
                if (!dead_col_[j] && obj_[j] < 0) { enter = j; break; }
            if (enter == cols_) return true;

            std::size_t leave = rows_.size();
            Rational best;
            for (std::size_t i = 0; i < tab_.size(); ++i) {
                if (tab_[i][enter] <= 0) continue;
                Rational ratio = tab_[i].back() / tab_[i][enter];
                if (leave == rows_.size() || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == rows_.size()) return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        Rational inv = tab_[row][col];
        for (auto& v : tab_[row]) v /= inv;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == row) continue;
            const Rational f = tab_[i][col];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * tab_[row][j];
        }
        const Rational f = obj_[col];
        if (f != 0)
            for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * tab_[row][j];
        basis_[row] = col;
    }

    void purge_artificials() {
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if (basis_[i] < art_begin_) continue;
            // pivot the artificial out on any live column; if the row is
            // structurally empty the constraint was redundant
            std::size_t col = cols_;
            for (std::size_t j = 0; j < art_begin_; ++j)
                if (!dead_col_[j] && tab_[i][j] != 0) { col = j; break; }
            if (col != cols_) pivot(i, col);
        }
        for (std::size_t j = art_begin_; j < cols_; ++j) dead_col_[j] = true;
    }
};

} // namespace jetfpt
