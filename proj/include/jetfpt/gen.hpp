#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "jetfpt/poly.hpp"

namespace jetfpt {

/// The pinned PRNG for seeded coefficient generation. Certificates must be
/// reproducible from (seed, d, N, p) alone, so the generator is spelled out
/// here rather than delegated to a platform engine: splitmix64 with the
/// standard constants, state seeded directly with the user seed.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [1, p-1]: reduce mod p, reject zeros.
    std::uint32_t nonzero_mod(std::uint32_t p) {
        for (;;) {
            auto r = static_cast<std::uint32_t>(next() % p);
            if (r != 0) return r;
        }
    }
};

/// A degree-d form in N variables with one seeded nonzero coefficient for
/// every degree-d monomial (full support). Index tuples (i_1 <= ... <= i_d)
/// are enumerated in ascending lexicographic order and consume PRNG draws
/// in that order.
struct GeneralTypePolynomial {
    int d = 0;
    int n = 0;
    std::uint32_t p = 0;
    std::uint64_t seed = 0;
    std::map<std::vector<int>, std::uint32_t> coefficients; // tuple -> F_p\{0}
    PolyMod poly; // over VarTable(n, 0)

    const std::uint32_t* coefficient(const std::vector<int>& tuple) const {
        auto it = coefficients.find(tuple);
        return it == coefficients.end() ? nullptr : &it->second;
    }
};

inline GeneralTypePolynomial gen_general_type(int d, int n, std::uint32_t p,
                                              std::uint64_t seed) {
    if (d < 1 || n < 1) throw PreconditionError("gen_general_type: need d >= 1 and N >= 1");
    if (!is_prime(p)) throw StructureError("gen_general_type: p must be prime");

    GeneralTypePolynomial g;
    g.d = d;
    g.n = n;
    g.p = p;
    g.seed = seed;

    SplitMix64 rng(seed);
    VarTable vt(n, 0);
    std::vector<PolyMod::Term> terms;

    std::vector<int> tuple(d, 1);
    for (;;) {
        std::uint32_t c = rng.nonzero_mod(p);
        g.coefficients.emplace(tuple, c);
        Monomial m(vt.count());
        for (int i : tuple) m.set_exp(vt.flat(i, 0), m.exp(vt.flat(i, 0)) + 1);
        terms.emplace_back(std::move(m), c);

        // next nondecreasing tuple in lexicographic order
        int k = d - 1;
        while (k >= 0 && tuple[k] == n) --k;
        if (k < 0) break;
        int v = tuple[k] + 1;
        for (int j = k; j < d; ++j) tuple[j] = v;
    }

    g.poly = PolyMod::from_terms(vt, p, std::move(terms));
    return g;
}

} // namespace jetfpt
