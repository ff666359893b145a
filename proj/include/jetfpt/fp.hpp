#pragma once

#include <cstdint>

#include "jetfpt/errors.hpp"

namespace jetfpt {

// Arithmetic in the prime field F_p. Coefficients are kept reduced to
// [0, p); p is small (p <= 251, since q = p^e <= 256), so 64-bit
// intermediates never overflow.

inline std::uint32_t mod_add(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    std::uint32_t s = a + b;
    return s >= p ? s - p : s;
}

inline std::uint32_t mod_sub(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return a >= b ? a - b : a + p - b;
}

inline std::uint32_t mod_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

inline std::uint32_t mod_pow(std::uint32_t a, std::uint64_t k, std::uint32_t p) {
    std::uint64_t r = 1 % p;
    std::uint64_t x = a % p;
    for (; k; k >>= 1) {
        if (k & 1) r = r * x % p;
        x = x * x % p;
    }
    return static_cast<std::uint32_t>(r);
}

inline std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
    if (a % p == 0) throw StructureError("mod_inv: zero has no inverse");
    return mod_pow(a, p - 2, p); // p prime
}

/// Reduce a (possibly negative) integer into [0, p).
inline std::uint32_t mod_reduce(long long v, std::uint32_t p) {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r);
}

/// Deterministic primality by trial division; p stays below 256 here.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Checks q = p^e with e >= 1 and q <= 256; returns e.
inline unsigned frobenius_exponent(std::uint32_t q, std::uint32_t p) {
    if (q > 256) throw RangeError("Frobenius power q exceeds the supported range 256");
    if (q < 2) throw RangeError("Frobenius power q must be at least p");
    unsigned e = 0;
    std::uint32_t w = q;
    while (w % p == 0) { w /= p; ++e; }
    if (w != 1 || e == 0) throw RangeError("q is not a power of the coefficient prime");
    return e;
}

} // namespace jetfpt
