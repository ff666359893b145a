#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace jetfpt {

// Exact rational arithmetic for fpt ratios, exponent matrices, and the
// simplex kernel. cpp_rational keeps values normalized (positive
// denominator, coprime), which makes string output canonical.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Canonical text form: "n" for integers, "n/d" otherwise.
inline std::string rational_to_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace jetfpt
