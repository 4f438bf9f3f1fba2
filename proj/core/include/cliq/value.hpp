#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace cliq {

/// Runtime scalar: Int (32-bit wrapping), Float (IEEE-754 double), Bool.
/// Arrays are handled separately by the interpreters.
using Value = std::variant<int32_t, double, bool>;

inline bool is_int(const Value& v) { return std::holds_alternative<int32_t>(v); }
inline bool is_float(const Value& v) { return std::holds_alternative<double>(v); }
inline bool is_bool(const Value& v) { return std::holds_alternative<bool>(v); }

inline int32_t as_int(const Value& v) { return std::get<int32_t>(v); }
inline double as_float(const Value& v) { return std::get<double>(v); }
inline bool as_bool(const Value& v) { return std::get<bool>(v); }

/// Numeric value widened to double (Int or Float).
inline double widen(const Value& v) {
    return is_int(v) ? static_cast<double>(as_int(v)) : as_float(v);
}

/// Shortest decimal rendering of a double that parses back to the same
/// bits; integral values get a ".0" suffix so the text still lexes as a
/// float literal.
std::string format_double(double x);

/// Canonical text of a runtime value: decimal ints, true/false bools,
/// format_double floats.
std::string value_to_string(const Value& v);

namespace num {

// 32-bit two's-complement wrapping arithmetic. All source-language Int
// operations go through these helpers so both interpreters agree bit for
// bit.

inline int32_t wrap(int64_t x) { return static_cast<int32_t>(static_cast<uint64_t>(x)); }

inline int32_t wrap_add(int32_t a, int32_t b) {
    return static_cast<int32_t>(static_cast<uint32_t>(a) + static_cast<uint32_t>(b));
}
inline int32_t wrap_sub(int32_t a, int32_t b) {
    return static_cast<int32_t>(static_cast<uint32_t>(a) - static_cast<uint32_t>(b));
}
inline int32_t wrap_mul(int32_t a, int32_t b) {
    return static_cast<int32_t>(static_cast<uint32_t>(a) * static_cast<uint32_t>(b));
}
inline int32_t wrap_neg(int32_t a) { return static_cast<int32_t>(-static_cast<uint32_t>(a)); }

/// Floor division: quotient rounded toward negative infinity. b must be
/// nonzero. The INT32_MIN / -1 case wraps like the other operations.
inline int32_t floor_div(int32_t a, int32_t b) {
    int64_t q = static_cast<int64_t>(a) / b;
    int64_t r = static_cast<int64_t>(a) % b;
    if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
    return wrap(q);
}

/// Modulo paired with floor_div: result has the divisor's sign (or is 0).
inline int32_t floor_mod(int32_t a, int32_t b) {
    int64_t r = static_cast<int64_t>(a) % b;
    if (r != 0 && ((r < 0) != (b < 0))) r += b;
    return wrap(r);
}

/// base ** exp with wrapping multiplication (square-and-multiply; exact
/// because multiplication mod 2^32 is a ring operation). exp must be >= 0.
inline int32_t pow_wrap(int32_t base, int32_t exp) {
    uint32_t acc = 1;
    uint32_t b = static_cast<uint32_t>(base);
    uint32_t e = static_cast<uint32_t>(exp);
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return static_cast<int32_t>(acc);
}

} // namespace num
} // namespace cliq
