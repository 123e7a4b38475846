#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace ctxgen {

/// Unbounded integer used for constants, symbolic folding and the oracle.
using Int = boost::multiprecision::cpp_int;

/// C99 division: truncates toward zero. Divisor must be non-zero.
inline Int c_div(const Int& a, const Int& b) { return a / b; }

/// C99 remainder: sign follows the dividend. Divisor must be non-zero.
inline Int c_mod(const Int& a, const Int& b) { return a % b; }

inline std::string to_string(const Int& v) { return v.str(); }

}  // namespace ctxgen
