#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jetfpt/errors.hpp"
#include "jetfpt/fp.hpp"
#include "jetfpt/monomial.hpp"
#include "jetfpt/vartable.hpp"

namespace jetfpt {

/// Sparse multivariate polynomial over F_p.
///
/// Terms are kept sorted by the canonical monomial order with no zero
/// coefficients, so equal polynomials have identical term vectors and
/// serialize identically. Values are immutable after construction and
/// safe to share across threads.
class PolyMod {
public:
    using Term = std::pair<Monomial, std::uint32_t>;

    PolyMod() = default;
    PolyMod(VarTable vt, std::uint32_t p) : vt_(vt), p_(p) {
        if (!is_prime(p)) throw StructureError("PolyMod: modulus must be prime");
    }

    static PolyMod zero(VarTable vt, std::uint32_t p) { return PolyMod(vt, p); }

    static PolyMod constant(VarTable vt, std::uint32_t p, long long c) {
        PolyMod r(vt, p);
        if (std::uint32_t v = mod_reduce(c, p); v != 0)
            r.terms_.emplace_back(Monomial::one(vt.count()), v);
        return r;
    }

    static PolyMod variable(VarTable vt, std::uint32_t p, std::size_t flat) {
        PolyMod r(vt, p);
        r.terms_.emplace_back(Monomial::variable(flat, vt.count()), 1u);
        return r;
    }

    /// Normalizes an arbitrary term list: reduces coefficients mod p,
    /// combines equal monomials, drops zeros, sorts canonically.
    static PolyMod from_terms(VarTable vt, std::uint32_t p, std::vector<Term> terms) {
        PolyMod r(vt, p);
        std::sort(terms.begin(), terms.end(),
                  [](const Term& a, const Term& b) { return a.first < b.first; });
        for (auto& [m, c] : terms) {
            std::uint32_t v = c % p;
            if (m.nvars() != vt.count())
                throw StructureError("PolyMod: monomial width does not match the variable table");
            if (!r.terms_.empty() && r.terms_.back().first == m) {
                r.terms_.back().second = mod_add(r.terms_.back().second, v, p);
            } else {
                r.terms_.emplace_back(std::move(m), v);
            }
        }
        std::erase_if(r.terms_, [](const Term& t) { return t.second == 0; });
        return r;
    }

    const VarTable& vars() const { return vt_; }
    std::uint32_t p() const { return p_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    std::uint32_t coeff_of(const Monomial& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& k) { return t.first < k; });
        return (it != terms_.end() && it->first == m) ? it->second : 0u;
    }

    std::uint32_t constant_term() const {
        return terms_.empty() ? 0u : (terms_.front().first.is_one() ? terms_.front().second : 0u);
    }

    /// Minimal total degree over the terms (the order at the origin); -1 for 0.
    int order_at_origin() const {
        int best = -1;
        for (const auto& [m, c] : terms_) {
            int d = m.degree();
            if (best < 0 || d < best) best = d;
        }
        return best;
    }

    /// Total degree; -1 for the zero polynomial.
    int degree() const {
        int best = -1;
        for (const auto& [m, c] : terms_) best = std::max(best, m.degree());
        return best;
    }

    /// Degree d when every term has total degree d.
    std::optional<int> homogeneous_degree() const {
        if (terms_.empty()) return std::nullopt;
        int d = terms_.front().first.degree();
        for (const auto& [m, c] : terms_)
            if (m.degree() != d) return std::nullopt;
        return d;
    }

    bool compatible(const PolyMod& o) const { return p_ == o.p_ && vt_ == o.vt_; }

    void require_compatible(const PolyMod& o) const {
        if (p_ != o.p_) throw StructureError("polynomials live over different primes");
        if (!(vt_ == o.vt_)) throw StructureError("polynomials live over different variable tables");
    }

    PolyMod add(const PolyMod& o) const {
        require_compatible(o);
        PolyMod r(vt_, p_);
        r.terms_.reserve(terms_.size() + o.terms_.size());
        auto a = terms_.begin(), b = o.terms_.begin();
        while (a != terms_.end() || b != o.terms_.end()) {
            if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
                r.terms_.push_back(*a++);
            } else if (a == terms_.end() || b->first < a->first) {
                r.terms_.push_back(*b++);
            } else {
                std::uint32_t c = mod_add(a->second, b->second, p_);
                if (c) r.terms_.emplace_back(a->first, c);
                ++a, ++b;
            }
        }
        return r;
    }

    PolyMod scaled(long long k) const {
        std::uint32_t v = mod_reduce(k, p_);
        PolyMod r(vt_, p_);
        if (v == 0) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, mod_mul(c, v, p_));
        return r;
    }

    PolyMod times_monomial(const Monomial& m, std::uint32_t c) const {
        PolyMod r(vt_, p_);
        if (c % p_ == 0) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& [tm, tc] : terms_)
            r.terms_.emplace_back(tm.times(m), mod_mul(tc, c, p_));
        return r;
    }

    /// Plain product; total exponents must stay below 256.
    PolyMod times(const PolyMod& o) const { return mul_pruned_impl(o, 256, 1, true); }

    /// d/dx_v with the usual characteristic-p drop of multiples of p.
    PolyMod derivative(std::size_t v) const {
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            unsigned e = m.exp(v);
            if (e == 0) continue;
            std::uint32_t k = mod_mul(c, e % p_, p_);
            if (k == 0) continue;
            Monomial q = m;
            q.set_exp(v, e - 1);
            out.emplace_back(std::move(q), k);
        }
        return from_terms(vt_, p_, std::move(out));
    }

    std::uint32_t evaluate(std::span<const std::uint32_t> point) const {
        if (point.size() != vt_.count())
            throw StructureError("evaluate: point length does not match the variable count");
        std::uint32_t acc = 0;
        for (const auto& [m, c] : terms_) {
            std::uint32_t t = c;
            for (std::size_t v = 0; v < point.size(); ++v)
                if (unsigned e = m.exp(v); e)
                    t = mod_mul(t, mod_pow(point[v], e, p_), p_);
            acc = mod_add(acc, t, p_);
        }
        return acc;
    }

    /// Drops every term with some exponent >= cap, i.e. reduces modulo the
    /// Frobenius bracket m^[cap].
    PolyMod pruned(int cap) const {
        PolyMod r(vt_, p_);
        for (const auto& t : terms_)
            if (t.first.outside_bracket(static_cast<unsigned>(cap))) r.terms_.push_back(t);
        return r;
    }

    /// Re-homes the polynomial into another variable table. image[v] gives
    /// the flat index the old variable v maps to, or -1 to substitute 0
    /// (killing every term where v appears). Images may collide; exponents
    /// add up.
    PolyMod remapped(const VarTable& new_vt, const std::vector<int>& image) const {
        if (image.size() != vt_.count())
            throw StructureError("remapped: image size does not match the variable count");
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            Monomial nm(new_vt.count());
            bool dead = false;
            for (std::size_t v = 0; v < image.size() && !dead; ++v) {
                unsigned e = m.exp(v);
                if (!e) continue;
                if (image[v] < 0) { dead = true; break; }
                nm.set_exp(static_cast<std::size_t>(image[v]),
                           nm.exp(static_cast<std::size_t>(image[v])) + e);
            }
            if (!dead) out.emplace_back(std::move(nm), c);
        }
        return from_terms(new_vt, p_, std::move(out));
    }

    /// Embeds a polynomial over VarTable(N, m) into VarTable(N, m'), m' >= m.
    /// Flat indices of existing variables are preserved by the layout.
    PolyMod lifted(const VarTable& bigger) const {
        if (bigger.base_vars != vt_.base_vars || bigger.level < vt_.level)
            throw StructureError("lifted: target table does not extend the source");
        std::vector<int> image(vt_.count());
        for (std::size_t v = 0; v < image.size(); ++v) image[v] = static_cast<int>(v);
        return remapped(bigger, image);
    }

    bool operator==(const PolyMod& o) const {
        return p_ == o.p_ && vt_ == o.vt_ && terms_ == o.terms_;
    }

    friend PolyMod mul_pruned(const PolyMod& a, const PolyMod& b, int cap, int threads);
    friend PolyMod power_residue(const PolyMod& a, std::uint64_t k, int cap, int threads);

private:
    PolyMod mul_pruned_impl(const PolyMod& o, int cap, int threads, bool checked) const;

    VarTable vt_{1, 0};
    std::uint32_t p_ = 2;
    std::vector<Term> terms_;
};

namespace detail {

/// One worker's share of a product: rows [lo, hi) of a times all of b.
inline void mul_block(const std::vector<PolyMod::Term>& a, std::size_t lo, std::size_t hi,
                      const std::vector<PolyMod::Term>& b, int cap, std::uint32_t p,
                      std::unordered_map<Monomial, std::uint32_t, MonomialHash>& acc) {
    for (std::size_t i = lo; i < hi; ++i) {
        const auto& [ma, ca] = a[i];
        for (const auto& [mb, cb] : b) {
            auto m = ma.times_capped(mb, cap);
            if (!m) continue;
            std::uint32_t c = mod_mul(ca, cb, p);
            auto [it, fresh] = acc.try_emplace(std::move(*m), c);
            if (!fresh) {
                it->second = mod_add(it->second, c, p);
                if (it->second == 0) acc.erase(it); // keep the map minimal
            }
        }
    }
}

} // namespace detail

inline PolyMod PolyMod::mul_pruned_impl(const PolyMod& o, int cap, int threads,
                                        bool checked) const {
    require_compatible(o);
    if (cap < 1 || cap > 256) throw RangeError("mul_pruned: cap must lie in [1, 256]");
    const auto& a = terms_.size() >= o.terms_.size() ? terms_ : o.terms_;
    const auto& b = terms_.size() >= o.terms_.size() ? o.terms_ : terms_;

    std::unordered_map<Monomial, std::uint32_t, MonomialHash> acc;
    acc.reserve(a.size() + b.size());
    int workers = std::max(1, threads);
    if (workers == 1 || a.size() < 64) {
        detail::mul_block(a, 0, a.size(), b, cap, p_, acc);
    } else {
        // Partition one operand's terms; partial maps merge by modular
        // addition, so the result does not depend on the worker count.
        std::vector<std::unordered_map<Monomial, std::uint32_t, MonomialHash>> parts(workers);
        std::vector<std::thread> pool;
        std::size_t chunk = (a.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            std::size_t lo = std::min(a.size(), w * chunk);
            std::size_t hi = std::min(a.size(), lo + chunk);
            if (lo >= hi) continue;
            pool.emplace_back([&, lo, hi, w] {
                detail::mul_block(a, lo, hi, b, cap, p_, parts[w]);
            });
        }
        for (auto& t : pool) t.join();
        for (auto& part : parts)
            for (auto& [m, c] : part) {
                auto [it, fresh] = acc.try_emplace(m, c);
                if (!fresh) {
                    it->second = mod_add(it->second, c, p_);
                    if (it->second == 0) acc.erase(it);
                }
            }
    }

    if (checked && cap == 256 && !a.empty() && !b.empty()) {
        // times(): a capped-out term is an overflow, not a reduction
        std::vector<unsigned> ma(vt_.count(), 0), mb(vt_.count(), 0);
        for (const auto& [m, c] : a)
            for (std::size_t v = 0; v < ma.size(); ++v) ma[v] = std::max<unsigned>(ma[v], m.exp(v));
        for (const auto& [m, c] : b)
            for (std::size_t v = 0; v < mb.size(); ++v) mb[v] = std::max<unsigned>(mb[v], m.exp(v));
        for (std::size_t v = 0; v < ma.size(); ++v)
            if (ma[v] + mb[v] > 255) {
                for (const auto& [x, cx] : a)
                    for (const auto& [y, cy] : b)
                        if (!x.times_capped(y, 256))
                            throw RangeError("times: exponent exceeds 255");
                break;
            }
    }

    PolyMod r(vt_, p_);
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c) r.terms_.emplace_back(m, c);
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return x.first < y.first; });
    return r;
}

/// a*b with every monomial having some exponent >= cap discarded; equals
/// (a*b mod m^[cap]) exactly. Pruning mid-accumulation is sound because
/// exponents never decrease under multiplication.
inline PolyMod mul_pruned(const PolyMod& a, const PolyMod& b, int cap, int threads = 1) {
    return a.mul_pruned_impl(b, cap, threads, false);
}

/// a^k mod m^[cap] by square-and-multiply with per-step pruning.
inline PolyMod power_residue(const PolyMod& a, std::uint64_t k, int cap, int threads = 1) {
    if (cap < 1 || cap > 256) throw RangeError("power_residue: cap must lie in [1, 256]");
    PolyMod result = PolyMod::constant(a.vars(), a.p(), 1);
    PolyMod base = a.pruned(cap);
    while (k) {
        if (k & 1) result = mul_pruned(result, base, cap, threads);
        k >>= 1;
        if (k) base = mul_pruned(base, base, cap, threads);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Text format: terms separated by '+' or newlines; each term is an optional
// integer coefficient followed by variable tokens x<i>_<j>^<e>, where _<j>
// defaults to j = 0 and ^<e> to e = 1. Whitespace is insignificant.
// ---------------------------------------------------------------------------

namespace detail {

struct TextScanner {
    std::string_view s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    bool peek_digit_or_minus() {
        skip_ws();
        return i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '-');
    }
    long long integer() {
        skip_ws();
        bool neg = false;
        if (i < s.size() && s[i] == '-') { neg = true; ++i; }
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw ParseError("expected an integer in polynomial text");
        long long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + (s[i] - '0');
            if (v > (1ll << 62)) throw ParseError("integer literal too large");
            ++i;
        }
        return neg ? -v : v;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
};

inline PolyMod::Term parse_term(std::string_view text, const VarTable& vt, std::uint32_t p) {
    TextScanner sc{text};
    long long coeff = 1;
    if (sc.peek_digit_or_minus()) coeff = sc.integer();
    Monomial m(vt.count());
    while (!sc.done()) {
        if (!sc.eat('x')) throw ParseError("expected variable token 'x<i>'");
        long long idx = sc.integer();
        long long j = 0;
        if (sc.eat('_')) j = sc.integer();
        long long e = 1;
        if (sc.eat('^')) e = sc.integer();
        if (idx < 1 || idx > vt.base_vars || j < 0 || j > vt.level)
            throw ParseError("variable x" + std::to_string(idx) + "_" + std::to_string(j) +
                             " is outside the ring");
        if (e < 0 || e > 255) throw ParseError("exponent out of the supported range [0, 255]");
        std::size_t v = vt.flat(static_cast<int>(idx), static_cast<int>(j));
        long long total = static_cast<long long>(m.exp(v)) + e;
        if (total > 255) throw ParseError("exponent out of the supported range [0, 255]");
        m.set_exp(v, static_cast<unsigned>(total));
    }
    return {std::move(m), mod_reduce(coeff, p)};
}

} // namespace detail

inline PolyMod parse_poly(std::string_view text, const VarTable& vt, std::uint32_t p) {
    std::vector<PolyMod::Term> terms;
    std::size_t start = 0;
    auto flush = [&](std::string_view piece) {
        std::size_t a = piece.find_first_not_of(" \t\r");
        if (a == std::string_view::npos) return; // blank chunk
        terms.push_back(detail::parse_term(piece, vt, p));
    };
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '+' || text[i] == '\n') {
            flush(text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (terms.empty()) throw ParseError("empty polynomial text");
    // a single literal "0" is the zero polynomial; from_terms drops it
    return PolyMod::from_terms(vt, p, std::move(terms));
}

inline std::string monomial_to_string(const Monomial& m, const VarTable& vt) {
    std::string s;
    for (std::size_t v = 0; v < m.nvars(); ++v) {
        unsigned e = m.exp(v);
        if (!e) continue;
        if (!s.empty()) s += ' ';
        s += vt.name(v);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
}

inline std::string serialize_poly(const PolyMod& f) {
    if (f.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : f.terms()) {
        if (!out.empty()) out += " + ";
        out += std::to_string(c);
        if (!m.is_one()) out += ' ' + monomial_to_string(m, f.vars());
    }
    return out;
}

} // namespace jetfpt
