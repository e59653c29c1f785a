#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "ramsey_wb/errors.hpp"

namespace ramsey_wb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline BigInt floor(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt quot = num / den;
  if (num < 0 && quot * den != num) --quot;
  return quot;
}

inline BigInt ceil(const Rational& q) { return -floor(Rational(-q)); }

namespace detail {

inline BigInt parse_digits(std::string_view s) {
  BigInt v = 0;
  for (char ch : s) v = v * 10 + (ch - '0');
  return v;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace detail

// Accepts `[-+]digits`, `[-+]digits.digits`, `.digits` and `p/q`.
// Decimals are read exactly: "0.1" is 1/10.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  if (s.empty()) throw ParseError("empty number");
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    BigInt d = detail::parse_digits(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    value = Rational(detail::parse_digits(num), d);
  } else {
    auto dot = s.find('.');
    auto whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    bool ok = (whole.empty() || detail::all_digits(whole)) && (frac.empty() || detail::all_digits(frac)) &&
              !(whole.empty() && frac.empty());
    if (!ok) throw ParseError("malformed number '" + std::string(text) + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt w = whole.empty() ? BigInt(0) : detail::parse_digits(whole);
    BigInt f = frac.empty() ? BigInt(0) : detail::parse_digits(frac);
    value = Rational(w * scale + f, scale);
  }
  return negative ? Rational(-value) : value;
}

// "p/q" or "p"; round-trips through parse_rational.
inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

}  // namespace ramsey_wb
