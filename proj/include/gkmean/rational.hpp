#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "gkmean/errors.hpp"

namespace gkmean {

using Rational = mpq_class;
using Integer = mpz_class;

namespace detail {

inline bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

inline std::string_view strip_sign(std::string_view s, bool& negative) {
  negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return s;
}

}  // namespace detail

/// True when `s` is an optionally signed run of decimal digits.
inline bool is_integer_literal(std::string_view s) {
  bool neg = false;
  return detail::is_digits(detail::strip_sign(s, neg));
}

/// Parses "p/q", an integer literal, or a decimal literal ("-1.25", "3e-2")
/// into an exact rational in lowest terms.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InputError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    bool nneg = false, dneg = false;
    auto nd = detail::strip_sign(num, nneg);
    auto dd = detail::strip_sign(den, dneg);
    if (!detail::is_digits(nd) || !detail::is_digits(dd) || dneg)
      throw InputError("malformed rational literal '" + std::string(text) + "'");
    Integer n(std::string(nd), 10), d(std::string(dd), 10);
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational r(nneg ? Integer(-n) : n, d);
    r.canonicalize();
    return r;
  }

  bool neg = false;
  auto body = detail::strip_sign(s, neg);
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = body.substr(e + 1);
    bool eneg = false;
    auto ed = detail::strip_sign(exp_text, eneg);
    if (!detail::is_digits(ed) || ed.size() > 6)
      throw InputError("malformed exponent in '" + std::string(text) + "'");
    exponent = std::stol(std::string(ed));
    if (eneg) exponent = -exponent;
    body = body.substr(0, e);
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto ip = body.substr(0, dot);
    auto fp = body.substr(dot + 1);
    if ((!ip.empty() && !detail::is_digits(ip)) || (!fp.empty() && !detail::is_digits(fp)) ||
        (ip.empty() && fp.empty()))
      throw InputError("malformed decimal literal '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!detail::is_digits(body)) throw InputError("malformed number '" + std::string(text) + "'");
    digits = std::string(body);
  }
  Integer mant(digits, 10);
  if (neg) mant = -mant;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(mant, scale) : Rational(mant * scale, 1);
  r.canonicalize();
  return r;
}

/// "p/q", or just "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace gkmean
