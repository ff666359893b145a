#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "jetfpt/errors.hpp"
#include "jetfpt/vartable.hpp"

namespace jetfpt {

/// A monomial in the jet variables, stored as a packed exponent vector
/// (one byte per flat variable index). Exponents are capped at 255,
/// which is what limits the supported Frobenius range to q <= 256.
///
/// The canonical total order is lexicographic on the exponent vector in
/// flat-index order; all serialization and certificate choices use it.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
    explicit Monomial(std::vector<std::uint8_t> exps) : e_(std::move(exps)) {}

    static Monomial one(std::size_t nvars) { return Monomial(nvars); }

    static Monomial variable(std::size_t v, std::size_t nvars, unsigned exp = 1) {
        Monomial m(nvars);
        m.set_exp(v, exp);
        return m;
    }

    std::size_t nvars() const { return e_.size(); }
    std::uint8_t exp(std::size_t v) const { return e_[v]; }
    const std::vector<std::uint8_t>& exponents() const { return e_; }

    void set_exp(std::size_t v, unsigned value) {
        if (value > 255) throw RangeError("Monomial: exponent exceeds 255");
        e_[v] = static_cast<std::uint8_t>(value);
    }

    bool is_one() const {
        for (auto x : e_) if (x) return false;
        return true;
    }

    int degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }

    /// Sum of j * exp(x_i^(j)) over all variables.
    long weight(const VarTable& vt) const {
        long w = 0;
        for (std::size_t v = 0; v < e_.size(); ++v)
            if (e_[v]) w += static_cast<long>(vt.weight(v)) * e_[v];
        return w;
    }

    /// Product, or nothing if some exponent of the product reaches cap.
    /// cap <= 256, so surviving exponents always fit a byte.
    std::optional<Monomial> times_capped(const Monomial& o, int cap) const {
        Monomial r(e_.size());
        for (std::size_t v = 0; v < e_.size(); ++v) {
            int s = static_cast<int>(e_[v]) + o.e_[v];
            if (s >= cap) return std::nullopt;
            r.e_[v] = static_cast<std::uint8_t>(s);
        }
        return r;
    }

    /// Plain product; exponent overflow past 255 is an error.
    Monomial times(const Monomial& o) const {
        auto r = times_capped(o, 256);
        if (!r) throw RangeError("Monomial: product exponent exceeds 255");
        return *r;
    }

    bool divides(const Monomial& o) const {
        for (std::size_t v = 0; v < e_.size(); ++v)
            if (e_[v] > o.e_[v]) return false;
        return true;
    }

    /// Exact quotient; caller guarantees divisibility.
    Monomial divided_by(const Monomial& o) const {
        Monomial r(e_.size());
        for (std::size_t v = 0; v < e_.size(); ++v) {
            if (o.e_[v] > e_[v]) throw StructureError("Monomial: non-divisible quotient");
            r.e_[v] = static_cast<std::uint8_t>(e_[v] - o.e_[v]);
        }
        return r;
    }

    /// True when every exponent is below q, i.e. the monomial lies
    /// outside the Frobenius bracket ideal m^[q].
    bool outside_bracket(unsigned q) const {
        for (auto x : e_) if (x >= q) return false;
        return true;
    }

    auto operator<=>(const Monomial&) const = default;

private:
    std::vector<std::uint8_t> e_;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const {
        // FNV-1a over the exponent bytes
        std::uint64_t h = 1469598103934665603ull;
        for (auto b : m.exponents()) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace jetfpt
