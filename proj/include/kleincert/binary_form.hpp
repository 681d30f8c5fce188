#pragma once

// Binary forms a(x, y) = sum_i c_i x^i y^(d-i): tangent cones, eliminants.

#include "kleincert/ring.hpp"
#include "kleincert/sparse_poly.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kleincert {

template <class R>
class BinaryForm {
 public:
  BinaryForm() = default;
  /// coeffs[i] multiplies x^i y^(degree - i).
  BinaryForm(unsigned degree, std::vector<R> coeffs) : degree_(degree), c_(std::move(coeffs)) {
    if (c_.size() != degree_ + 1) throw std::invalid_argument("binary form: expected degree+1 coefficients");
  }

  /// Reads a homogeneous polynomial in variables (xv, yv) of p; every other
  /// exponent must be zero.
  template <std::size_t N>
  static BinaryForm from_poly(const SparsePoly<R, N>& p, unsigned degree, std::size_t xv, std::size_t yv) {
    std::vector<R> c(degree + 1, p.zero_coefficient());
    for (const auto& [e, v] : p.terms()) {
      for (std::size_t i = 0; i < N; ++i)
        if (i != xv && i != yv && e[i] != 0) throw std::invalid_argument("binary form: extra variable");
      if (e[xv] + e[yv] != degree) throw std::invalid_argument("binary form: not homogeneous of the stated degree");
      c[e[xv]] = v;
    }
    return BinaryForm(degree, std::move(c));
  }

  unsigned degree() const noexcept { return degree_; }
  const std::vector<R>& coeffs() const noexcept { return c_; }
  const R& coeff(unsigned i) const { return c_.at(i); }

  bool is_zero() const {
    for (const auto& v : c_)
      if (!kleincert::is_zero(v)) return false;
    return true;
  }

  /// Multiplicity of the root (1:0), i.e. the power of y dividing the form.
  unsigned y_order() const {
    unsigned k = 0;
    while (k <= degree_ && kleincert::is_zero(c_[degree_ - k])) ++k;
    return k;
  }
  /// Multiplicity of the root (0:1), i.e. the power of x dividing the form.
  unsigned x_order() const {
    unsigned k = 0;
    while (k <= degree_ && kleincert::is_zero(c_[k])) ++k;
    return k;
  }

  R evaluate(const R& x, const R& y) const {
    R acc = kleincert::zero_like(x);
    for (unsigned i = 0; i <= degree_; ++i) {
      if (kleincert::is_zero(c_[i])) continue;
      R t = c_[i];
      for (unsigned k = 0; k < i; ++k) t = t * x;
      for (unsigned k = i; k < degree_; ++k) t = t * y;
      acc = acc + t;
    }
    return acc;
  }

  friend bool operator==(const BinaryForm& a, const BinaryForm& b) { return a.degree_ == b.degree_ && a.c_ == b.c_; }

 private:
  unsigned degree_ = 0;
  std::vector<R> c_;
};

namespace detail {

// Dense univariate helpers over a field; index = power, trimmed.
template <class R>
void trim_dense(std::vector<R>& p) {
  while (!p.empty() && kleincert::is_zero(p.back())) p.pop_back();
}

template <class R>
std::vector<R> dense_rem(std::vector<R> a, const std::vector<R>& b) {
  trim_dense(a);
  while (a.size() >= b.size() && !a.empty()) {
    const R c = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - c * b[i];
    a.pop_back();
    trim_dense(a);
  }
  return a;
}

template <class R>
std::vector<R> dense_gcd(std::vector<R> a, std::vector<R> b) {
  trim_dense(a);
  trim_dense(b);
  while (!b.empty()) {
    auto r = dense_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const R inv = kleincert::one_like(a.back()) / a.back();
    for (auto& v : a) v = v * inv;
  }
  return a;
}

}  // namespace detail

/// gcd of two binary forms, not both zero: the y-power (roots at infinity) is
/// handled separately, the rest by Euclid on the dehomogenizations at y = 1.
/// The result is normalized so its top x-coefficient equals one.
template <class R>
BinaryForm<R> binary_form_gcd(const BinaryForm<R>& a, const BinaryForm<R>& b) {
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("binary_form_gcd: both forms are zero");
  auto normalize = [](const BinaryForm<R>& f) {
    std::vector<R> c = f.coeffs();
    std::size_t top = c.size();
    while (kleincert::is_zero(c[top - 1])) --top;
    const R inv = kleincert::one_like(c[top - 1]) / c[top - 1];
    for (auto& v : c) v = v * inv;
    return BinaryForm<R>(f.degree(), std::move(c));
  };
  if (a.is_zero()) return normalize(b);
  if (b.is_zero()) return normalize(a);
  const unsigned ky = std::min(a.y_order(), b.y_order());
  // a(x, 1) as a dense polynomial in x
  auto dehom = [](const BinaryForm<R>& f) {
    std::vector<R> c = f.coeffs();
    detail::trim_dense(c);
    return c;
  };
  auto g = detail::dense_gcd(dehom(a), dehom(b));
  const unsigned gx = static_cast<unsigned>(g.size() - 1);
  const unsigned deg = gx + ky;
  std::vector<R> c(deg + 1, kleincert::zero_like(a.coeffs()[0]));
  for (unsigned i = 0; i <= gx; ++i) c[i] = g[i];
  return BinaryForm<R>(deg, std::move(c));
}

/// Discriminant b^2 - 4ac of a x^2 + b xy + c y^2, stored as coeffs (c, b, a).
template <class R>
R quadratic_discriminant(const BinaryForm<R>& q) {
  if (q.degree() != 2) throw std::invalid_argument("quadratic_discriminant: degree must be 2");
  const R& a = q.coeff(2);
  const R& b = q.coeff(1);
  const R& c = q.coeff(0);
  return b * b - a * c * ring_traits<R>::from_rational(a, Rational(4));
}

enum class QuadraticType { double_line, two_distinct_lines };

inline const char* to_string(QuadraticType t) {
  return t == QuadraticType::double_line ? "double_line" : "two_distinct_lines";
}

/// Distinctness over the algebraic closure is decided by the discriminant.
template <class R>
QuadraticType classify_binary_quadratic(const BinaryForm<R>& q) {
  if (q.degree() != 2) throw std::invalid_argument("classify_binary_quadratic: degree must be 2");
  if (q.is_zero()) throw std::invalid_argument("classify_binary_quadratic: zero form");
  return kleincert::is_zero(quadratic_discriminant(q)) ? QuadraticType::double_line
                                                       : QuadraticType::two_distinct_lines;
}

}  // namespace kleincert
