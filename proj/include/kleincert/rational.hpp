#pragma once

// Arbitrary-precision integers and rationals (GMP) plus the "p/q" text form
// used by every serialized artifact.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace kleincert {

using Integer = mpz_class;
using Rational = mpq_class;

/// Always "p/q" with q > 0, lowest terms; zero is "0/1".
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "p/q" or "p". Throws std::invalid_argument on malformed input or a
/// zero denominator.
inline Rational parse_rational(std::string_view s) {
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string_view t) {
    return std::string(!t.empty() && t[0] == '+' ? t.substr(1) : t);
  };
  const auto slash = s.find('/');
  const auto num = s.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!is_int(num) || !is_int(den))
    throw std::invalid_argument("malformed rational: '" + std::string(s) + "'");
  Integer n(strip_plus(num)), d(strip_plus(den));
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline Rational rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace kleincert
