#pragma once

#include <cstddef>
#include <string>

#include "jetfpt/errors.hpp"

namespace jetfpt {

/// Variable layout for the jet polynomial ring k[x_i^(j)].
///
/// The ring has N base variables x_1..x_N and jet level m; the variable
/// x_i^(j) (1 <= i <= N, 0 <= j <= m) sits at flat index j*N + (i-1).
/// The j = 0 slice carries the base variables themselves.
struct VarTable {
    int base_vars = 0; // N
    int level = 0;     // m

    VarTable() = default;
    VarTable(int n, int m) : base_vars(n), level(m) {
        if (n < 1 || m < 0) throw StructureError("VarTable: need N >= 1 and m >= 0");
    }

    std::size_t count() const { return static_cast<std::size_t>(level + 1) * base_vars; }

    std::size_t flat(int i, int j) const {
        if (i < 1 || i > base_vars || j < 0 || j > level)
            throw StructureError("VarTable: variable index out of range");
        return static_cast<std::size_t>(j) * base_vars + (i - 1);
    }

    int base_index(std::size_t v) const { return static_cast<int>(v % base_vars) + 1; } // i
    int weight(std::size_t v) const { return static_cast<int>(v / base_vars); }         // j

    std::string name(std::size_t v) const {
        std::string s = "x" + std::to_string(base_index(v));
        if (int j = weight(v); j > 0) s += "_" + std::to_string(j);
        return s;
    }

    bool operator==(const VarTable&) const = default;
};

} // namespace jetfpt
