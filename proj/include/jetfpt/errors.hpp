#pragma once

#include <stdexcept>
#include <string>

namespace jetfpt {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mixed moduli, mismatched variable tables, malformed containers.
struct StructureError : Error {
    explicit StructureError(const std::string& what) : Error(what) {}
};

/// Frobenius power / exponent outside the packed-exponent range (q <= 256).
struct RangeError : Error {
    explicit RangeError(const std::string& what) : Error(what) {}
};

/// An operation's mathematical precondition does not hold for the input.
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Malformed polynomial or monomial text.
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace jetfpt
