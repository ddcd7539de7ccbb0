#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bvlab {

/// Exact rational number. Every distance, coefficient and tolerance in the
/// library is a Scalar; nothing is ever rounded.
using Scalar = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                             boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Parses "p", "-p" or "p/q" (surrounding whitespace allowed). Decimal
/// notation is rejected so that every literal is exact.
std::optional<Scalar> parse_scalar(std::string_view text);

/// As parse_scalar, throwing InvalidArgument on malformed input.
Scalar parse_scalar_or_throw(std::string_view text);

/// Canonical text: "p" for integers, "p/q" in lowest terms otherwise.
std::string to_string(const Scalar& value);

bool is_integer(const Scalar& value);

/// Numerator of an integral scalar as int64; nullopt when not integral or out of range.
std::optional<std::int64_t> to_int64(const Scalar& value);

inline Scalar abs_value(const Scalar& value) { return value < 0 ? Scalar(-value) : value; }

}  // namespace bvlab
