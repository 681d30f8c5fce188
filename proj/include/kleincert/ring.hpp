#pragma once

// Minimal interface the generic containers (SparsePoly, dense elimination)
// need from a coefficient type.

#include "kleincert/rational.hpp"

#include <stdexcept>
#include <string>

namespace kleincert {

/// Specialized for Rational, FieldElement and SparsePoly. zero_like/one_like
/// take a prototype because field elements carry their field.
template <class R>
struct ring_traits;

template <>
struct ring_traits<Rational> {
  static bool is_zero(const Rational& r) { return sgn(r) == 0; }
  static Rational zero_like(const Rational&) { return Rational(0); }
  static Rational one_like(const Rational&) { return Rational(1); }
  static Rational from_rational(const Rational&, const Rational& r) { return r; }
};

template <class R>
bool is_zero(const R& r) {
  return ring_traits<R>::is_zero(r);
}
template <class R>
R zero_like(const R& r) {
  return ring_traits<R>::zero_like(r);
}
template <class R>
R one_like(const R& r) {
  return ring_traits<R>::one_like(r);
}

struct FieldMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivisionByZero : std::domain_error {
  DivisionByZero() : std::domain_error("division by zero") {}
};

}  // namespace kleincert
