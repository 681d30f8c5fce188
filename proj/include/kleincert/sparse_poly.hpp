#pragma once

// Sparse polynomials in N variables over an exact coefficient ring R.
//
// Terms live in a std::map keyed by exponent vectors under graded
// lexicographic order (x0 > x1 > ...). Zero coefficients are never stored.
// The coefficient of a missing term still needs a field for FieldElement and
// parameter coefficients, so every polynomial carries a zero prototype.

#include "kleincert/ring.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kleincert {

template <std::size_t N>
using Exponent = std::array<unsigned, N>;

template <std::size_t N>
unsigned total_degree(const Exponent<N>& e) {
  unsigned s = 0;
  for (auto v : e) s += v;
  return s;
}

/// Ascending graded lex: lower total degree first, ties broken so that the
/// map's last element is the grlex-leading term.
template <std::size_t N>
struct GrlexLess {
  bool operator()(const Exponent<N>& a, const Exponent<N>& b) const {
    const unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

template <class R, std::size_t N = 3>
class SparsePoly {
 public:
  using Exp = Exponent<N>;
  using Terms = std::map<Exp, R, GrlexLess<N>>;
  using coefficient_type = R;
  static constexpr std::size_t arity = N;

  SparsePoly() = default;
  /// Zero polynomial; proto fixes the coefficient field.
  explicit SparsePoly(const R& proto) : zero_(zero_like(proto)) {}

  static SparsePoly constant(const R& c) {
    SparsePoly p(c);
    p.add_term(Exp{}, c);
    return p;
  }
  static SparsePoly monomial(const Exp& e, const R& c) {
    SparsePoly p(c);
    p.add_term(e, c);
    return p;
  }
  static SparsePoly variable(std::size_t i, const R& proto) {
    Exp e{};
    e.at(i) = 1;
    return monomial(e, one_like(proto));
  }

  const Terms& terms() const noexcept { return terms_; }
  const R& zero_coefficient() const noexcept { return zero_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exp{}); }

  R coefficient(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? zero_ : it->second;
  }
  R constant_term() const { return coefficient(Exp{}); }

  /// Adds c·x^e, dropping the term if it cancels.
  void add_term(const Exp& e, const R& c) {
    if (kleincert::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second = it->second + c;
      if (kleincert::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Leading term in grlex order; requires a nonzero polynomial.
  const std::pair<const Exp, R>& leading() const {
    if (terms_.empty()) throw std::domain_error("leading term of the zero polynomial");
    return *terms_.rbegin();
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.rbegin()->first)); }
  /// Lowest total degree of a term; -1 for zero.
  int low_degree() const { return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.begin()->first)); }
  int degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
  }

  bool is_homogeneous() const { return terms_.empty() || degree() == low_degree(); }

  SparsePoly homogeneous_component(unsigned d) const {
    SparsePoly out(zero_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == d) out.terms_.emplace_hint(out.terms_.end(), e, c);
    return out;
  }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) { return a.terms_ == b.terms_; }

  SparsePoly operator-() const {
    SparsePoly out(*this);
    for (auto& [e, c] : out.terms_) c = zero_ - c;
    return out;
  }

  SparsePoly& operator+=(const SparsePoly& b) {
    adopt(b);
    for (const auto& [e, c] : b.terms_) add_term(e, c);
    return *this;
  }
  SparsePoly& operator-=(const SparsePoly& b) {
    adopt(b);
    for (const auto& [e, c] : b.terms_) add_term(e, zero_ - c);
    return *this;
  }
  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly out(a.terms_.empty() ? b.zero_ : a.zero_);
    if (a.terms_.empty() || b.terms_.empty()) return out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exp e;
        for (std::size_t i = 0; i < N; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  SparsePoly& operator*=(const SparsePoly& b) { return *this = *this * b; }

  /// Multiplies every coefficient by s (s may be of any type R * S -> R).
  template <class S>
  SparsePoly scaled(const S& s) const {
    SparsePoly out(zero_);
    for (const auto& [e, c] : terms_) {
      R v = c * s;
      if (!kleincert::is_zero(v)) out.terms_.emplace_hint(out.terms_.end(), e, std::move(v));
    }
    return out;
  }

  /// Multiplies by the monomial x^shift.
  SparsePoly shifted(const Exp& shift) const {
    SparsePoly out(zero_);
    for (const auto& [e, c] : terms_) {
      Exp f;
      for (std::size_t i = 0; i < N; ++i) f[i] = e[i] + shift[i];
      out.terms_.emplace(f, c);
    }
    return out;
  }

  SparsePoly pow(unsigned k) const {
    SparsePoly result = constant(one_like(zero_)), base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  SparsePoly derivative(std::size_t var) const {
    SparsePoly out(zero_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exp f = e;
      --f[var];
      out.add_term(f, c * R(ring_traits<R>::from_rational(zero_, Rational(e[var]))));
    }
    return out;
  }

  /// Exact value at x; V must support V * R (or R * V) products and sums.
  template <class V>
  V evaluate(const std::array<V, N>& x, const V& zero) const {
    V acc = zero;
    for (const auto& [e, c] : terms_) {
      V m = zero_like(zero) + one_like(zero);
      for (std::size_t i = 0; i < N; ++i)
        for (unsigned k = 0; k < e[i]; ++k) m = m * x[i];
      acc = acc + m * c;
    }
    return acc;
  }

  /// Maps every coefficient through fn (e.g. lifting Q into a cyclotomic field).
  template <class S, class Fn>
  SparsePoly<S, N> map_coefficients(const S& proto, Fn&& fn) const {
    SparsePoly<S, N> out(proto);
    for (const auto& [e, c] : terms_) out.add_term(e, fn(c));
    return out;
  }

  /// Exact quotient a / b by grlex leading-term division, or nullopt if b does
  /// not divide a. Needs field coefficients.
  friend std::optional<SparsePoly> divide_exact(const SparsePoly& a, const SparsePoly& b) {
    if (b.is_zero()) throw DivisionByZero();
    SparsePoly rem = a, q(a.zero_);
    const auto& [lb, cb] = b.leading();
    while (!rem.is_zero()) {
      const auto [lr, cr] = rem.leading();
      Exp shift;
      for (std::size_t i = 0; i < N; ++i) {
        if (lr[i] < lb[i]) return std::nullopt;
        shift[i] = lr[i] - lb[i];
      }
      const R c = cr / cb;
      q.add_term(shift, c);
      rem -= b.shifted(shift).scaled(c);
    }
    return q;
  }

 private:
  void adopt(const SparsePoly& b) {
    if (terms_.empty() && !b.terms_.empty()) zero_ = b.zero_;
  }

  R zero_{};
  Terms terms_;
};

template <class R, std::size_t N>
struct ring_traits<SparsePoly<R, N>> {
  using P = SparsePoly<R, N>;
  static bool is_zero(const P& p) { return p.is_zero(); }
  static P zero_like(const P& p) { return P(p.zero_coefficient()); }
  static P one_like(const P& p) { return P::constant(kleincert::one_like(p.zero_coefficient())); }
  static P from_rational(const P& proto, const Rational& r) {
    return P::constant(ring_traits<R>::from_rational(proto.zero_coefficient(), r));
  }
};

}  // namespace kleincert
