#pragma once

// Test-only oracles: naive reference implementations kept independent of
// the library's pruned kernels, so disagreements point at real bugs.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "jetfpt/gen.hpp"
#include "jetfpt/jet.hpp"
#include "jetfpt/poly.hpp"
#include "jetfpt/rational.hpp"

namespace oracle {

using jetfpt::Monomial;
using jetfpt::PolyMod;
using jetfpt::SplitMix64;
using jetfpt::VarTable;

using WideMono = std::vector<int>; // unbounded exponents
struct WidePoly {
    std::uint32_t p = 2;
    std::size_t nvars = 0;
    std::map<WideMono, std::uint32_t> terms;
};

inline WidePoly to_wide(const PolyMod& f) {
    WidePoly w;
    w.p = f.p();
    w.nvars = f.vars().count();
    for (const auto& [m, c] : f.terms()) {
        WideMono e(m.exponents().begin(), m.exponents().end());
        w.terms[e] = c;
    }
    return w;
}

inline PolyMod to_packed(const WidePoly& w, const VarTable& vt) {
    std::vector<PolyMod::Term> terms;
    for (const auto& [e, c] : w.terms) {
        Monomial m(vt.count());
        for (std::size_t v = 0; v < e.size(); ++v) m.set_exp(v, e[v]);
        terms.emplace_back(std::move(m), c);
    }
    return PolyMod::from_terms(vt, w.p, std::move(terms));
}

inline WidePoly naive_mul(const WidePoly& a, const WidePoly& b) {
    WidePoly c;
    c.p = a.p;
    c.nvars = a.nvars;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            WideMono m(a.nvars);
            for (std::size_t v = 0; v < a.nvars; ++v) m[v] = ma[v] + mb[v];
            std::uint32_t add = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(ca) * cb % a.p);
            auto [it, fresh] = c.terms.try_emplace(std::move(m), add);
            if (!fresh) {
                it->second = (it->second + add) % a.p;
                if (it->second == 0) c.terms.erase(it);
            }
        }
    return c;
}

inline WidePoly naive_pow(const WidePoly& a, unsigned k) {
    WidePoly r;
    r.p = a.p;
    r.nvars = a.nvars;
    r.terms[WideMono(a.nvars, 0)] = 1 % a.p;
    for (unsigned i = 0; i < k; ++i) r = naive_mul(r, a);
    return r;
}

inline WidePoly filter_bracket(const WidePoly& a, unsigned q) {
    WidePoly r;
    r.p = a.p;
    r.nvars = a.nvars;
    for (const auto& [m, c] : a.terms) {
        bool keep = true;
        for (int e : m)
            if (e >= static_cast<int>(q)) keep = false;
        if (keep) r.terms.emplace(m, c);
    }
    return r;
}

/// F^{q-1} mod m^[q] by full expansion then filtering.
inline PolyMod naive_fedder_residue(const jetfpt::JetSystem& sys, unsigned q) {
    WidePoly f;
    f.p = sys.p;
    f.nvars = sys.vt.count();
    f.terms[WideMono(f.nvars, 0)] = 1 % sys.p;
    for (const auto* eq : sys.all_equations()) f = naive_mul(f, to_wide(*eq));
    return to_packed(filter_bracket(naive_pow(f, q - 1), q), sys.vt);
}

// --- factorials and valuations ------------------------------------------

inline long long legendre_factorial_valuation(unsigned long long n, std::uint32_t p) {
    long long v = 0;
    for (unsigned long long pk = p; pk <= n; pk *= p) {
        v += static_cast<long long>(n / pk);
        if (pk > n / p) break; // avoid overflow of pk
    }
    return v;
}

inline long long legendre_multinomial_valuation(std::span<const unsigned long long> parts,
                                                std::uint32_t p) {
    unsigned long long total = 0;
    long long v = 0;
    for (auto part : parts) {
        total += part;
        v -= legendre_factorial_valuation(part, p);
    }
    return v + legendre_factorial_valuation(total, p);
}

inline jetfpt::BigInt factorial(unsigned n) {
    jetfpt::BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

inline jetfpt::BigInt multinomial_exact(std::span<const unsigned> parts) {
    unsigned total = 0;
    for (auto part : parts) total += part;
    jetfpt::BigInt r = factorial(total);
    for (auto part : parts) r /= factorial(part);
    return r;
}

// --- brute-force r_q ------------------------------------------------------

/// Largest s such that some degree-s monomial c in the center variables
/// (exponents < q) keeps c * x outside m^[q] for some residue monomial x.
inline std::optional<long> brute_r_q(const PolyMod& residue,
                                     std::span<const std::size_t> center, unsigned q) {
    if (residue.is_zero()) return std::nullopt;
    long best = -1;
    // c is maximized per residue monomial by packing every center variable
    // up to q-1, but enumerate honestly: try all exponent patterns on the
    // center variables against every residue monomial.
    std::vector<unsigned> exps(center.size(), 0);
    auto rec = [&](auto&& self, std::size_t idx, long degree) -> void {
        if (idx == center.size()) {
            for (const auto& [m, c] : residue.terms()) {
                bool fits = true;
                for (std::size_t i = 0; i < center.size() && fits; ++i)
                    if (exps[i] + m.exp(center[i]) >= q) fits = false;
                if (fits) { best = std::max(best, degree); break; }
            }
            return;
        }
        for (unsigned e = 0; e < q; ++e) {
            exps[idx] = e;
            self(self, idx + 1, degree + e);
        }
    };
    rec(rec, 0, 0);
    return best < 0 ? std::nullopt : std::optional<long>(best);
}

// --- truncated scalar series ----------------------------------------------

/// f evaluated on the truncated series (sum_j a_i^(j) t^j) with scalar
/// arithmetic mod t^{m+1}: the reference side of the jet substitution
/// identity. point[i][j] = a_{i+1}^(j).
inline std::vector<std::uint32_t> series_substitute(
    const PolyMod& f, const std::vector<std::vector<std::uint32_t>>& point, int m) {
    const std::uint32_t p = f.p();
    const int len = m + 1;
    using Ser = std::vector<std::uint32_t>;
    auto mul = [&](const Ser& a, const Ser& b) {
        Ser c(len, 0);
        for (int i = 0; i < len; ++i)
            for (int j = 0; i + j < len; ++j)
                c[i + j] = static_cast<std::uint32_t>(
                    (c[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
        return c;
    };
    Ser acc(len, 0);
    const VarTable& vt = f.vars();
    for (const auto& [mono, coeff] : f.terms()) {
        Ser term(len, 0);
        term[0] = coeff;
        for (int i = 1; i <= vt.base_vars; ++i) {
            unsigned e = mono.exp(vt.flat(i, 0));
            for (unsigned rep = 0; rep < e; ++rep) {
                Ser var(point[i - 1].begin(), point[i - 1].begin() + len);
                term = mul(term, var);
            }
        }
        for (int j = 0; j < len; ++j) acc[j] = (acc[j] + term[j]) % p;
    }
    return acc;
}

// --- random instance generation --------------------------------------------

inline PolyMod random_poly(const VarTable& vt, std::uint32_t p, int max_terms,
                           unsigned max_exp, SplitMix64& rng) {
    std::vector<PolyMod::Term> terms;
    int count = 1 + static_cast<int>(rng.next() % max_terms);
    for (int t = 0; t < count; ++t) {
        Monomial m(vt.count());
        for (std::size_t v = 0; v < vt.count(); ++v)
            m.set_exp(v, static_cast<unsigned>(rng.next() % (max_exp + 1)));
        terms.emplace_back(std::move(m), static_cast<std::uint32_t>(rng.next() % p));
    }
    return PolyMod::from_terms(vt, p, std::move(terms));
}

/// Random degree-d form in the base variables (possibly sparse).
inline PolyMod random_homogeneous(int n, std::uint32_t p, int d, int max_terms,
                                  SplitMix64& rng) {
    VarTable vt(n, 0);
    std::vector<PolyMod::Term> terms;
    int count = 1 + static_cast<int>(rng.next() % max_terms);
    for (int t = 0; t < count; ++t) {
        Monomial m(vt.count());
        for (int k = 0; k < d; ++k) {
            std::size_t v = vt.flat(1 + static_cast<int>(rng.next() % n), 0);
            m.set_exp(v, m.exp(v) + 1);
        }
        terms.emplace_back(std::move(m), 1 + static_cast<std::uint32_t>(rng.next() % (p - 1)));
    }
    return PolyMod::from_terms(vt, p, std::move(terms));
}

/// Random polynomial in the base variables with terms of degree <= d.
inline PolyMod random_base_poly(int n, std::uint32_t p, int d, int max_terms,
                                SplitMix64& rng) {
    VarTable vt(n, 0);
    std::vector<PolyMod::Term> terms;
    int count = 1 + static_cast<int>(rng.next() % max_terms);
    for (int t = 0; t < count; ++t) {
        Monomial m(vt.count());
        int deg = static_cast<int>(rng.next() % (d + 1));
        for (int k = 0; k < deg; ++k) {
            std::size_t v = vt.flat(1 + static_cast<int>(rng.next() % n), 0);
            m.set_exp(v, m.exp(v) + 1);
        }
        terms.emplace_back(std::move(m), 1 + static_cast<std::uint32_t>(rng.next() % (p - 1)));
    }
    return PolyMod::from_terms(vt, p, std::move(terms));
}

} // namespace oracle
