#include "bvlab/scalar.hpp"

#include "bvlab/errors.hpp"

#include <cctype>
#include <limits>

namespace bvlab {
namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

std::optional<Integer> parse_integer(std::string_view text, bool allow_sign) {
  text = trim(text);
  bool negative = false;
  if (allow_sign && !text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) return std::nullopt;
  for (char ch : text) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
  }
  Integer value{std::string(text)};
  return negative ? Integer(-value) : value;
}

}  // namespace

std::optional<Scalar> parse_scalar(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    auto whole = parse_integer(text, true);
    if (!whole) return std::nullopt;
    return Scalar(*whole);
  }
  auto num = parse_integer(text.substr(0, slash), true);
  auto den = parse_integer(text.substr(slash + 1), false);
  if (!num || !den || *den == 0) return std::nullopt;
  return Scalar(*num, *den);
}

Scalar parse_scalar_or_throw(std::string_view text) {
  auto value = parse_scalar(text);
  if (!value) throw InvalidArgument("not an exact rational: '" + std::string(text) + "'");
  return *value;
}

std::string to_string(const Scalar& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool is_integer(const Scalar& value) { return boost::multiprecision::denominator(value) == 1; }

std::optional<std::int64_t> to_int64(const Scalar& value) {
  if (!is_integer(value)) return std::nullopt;
  const Integer num = boost::multiprecision::numerator(value);
  if (num > std::numeric_limits<std::int64_t>::max() || num < std::numeric_limits<std::int64_t>::min()) {
    return std::nullopt;
  }
  return num.convert_to<std::int64_t>();
}

}  // namespace bvlab
