#pragma once

// Polynomial algorithms on top of SparsePoly: linear changes of variables,
// determinants of polynomial matrices, Sylvester resultants, weighted degrees.

#include "kleincert/cyclotomic.hpp"
#include "kleincert/matrix3.hpp"
#include "kleincert/sparse_poly.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kleincert {

using QPoly = SparsePoly<Rational, 3>;      // rational coefficients
using FPoly = SparsePoly<FieldElement, 3>;  // cyclotomic coefficients
using ParamPoly = FPoly;                    // polynomial in the parameters lambda, mu, nu
using PPoly = SparsePoly<ParamPoly, 3>;     // coefficients polynomial in the parameters

inline FPoly lift(const QPoly& p, const FieldPtr& f) {
  return p.map_coefficients(FieldElement(f), [&](const Rational& c) { return FieldElement(f, c); });
}
inline FPoly lift(const FPoly& p, const FieldPtr& f) {
  return p.map_coefficients(FieldElement(f), [&](const FieldElement& c) { return embed(c, f); });
}
/// Constant parameter coefficients.
inline PPoly lift_params(const FPoly& p) {
  const ParamPoly zero(p.zero_coefficient());
  return p.map_coefficients(zero, [](const FieldElement& c) { return ParamPoly::constant(c); });
}
inline PPoly lift_params(const QPoly& p, const FieldPtr& f) { return lift_params(lift(p, f)); }

inline FieldElement mul_scalar(const FieldElement& c, const FieldElement& s) { return c * s; }
inline ParamPoly mul_scalar(const ParamPoly& c, const FieldElement& s) { return c.scaled(s); }

/// p(y) -> p(m y): y_i is replaced by the i-th row of m applied to y. Powers of
/// the three linear forms and their pairwise products are memoized, so one
/// instance amortizes well over many polynomials.
class LinearSubstitution {
 public:
  explicit LinearSubstitution(Matrix3 m) : m_(std::move(m)), monomial_(m_.is_monomial()) {
    const FieldElement zero(m_.field());
    for (std::size_t i = 0; i < 3; ++i) {
      FPoly l(zero);
      for (std::size_t j = 0; j < 3; ++j) {
        Exponent<3> e{};
        e[j] = 1;
        l.add_term(e, m_(i, j));
      }
      forms_[i] = std::move(l);
      powers_[i].push_back(FPoly::constant(FieldElement(m_.field(), 1L)));
    }
  }

  const Matrix3& matrix() const noexcept { return m_; }

  /// The image of the monomial y^e.
  const FPoly& image(const Exponent<3>& e) {
    auto it = monomials_.find(e);
    if (it != monomials_.end()) return it->second;
    FPoly img;
    if (monomial_) {
      FieldElement c(m_.field(), 1L);
      Exponent<3> out{};
      for (std::size_t i = 0; i < 3; ++i) {
        if (e[i] == 0) continue;
        std::size_t j = 0;
        while (m_(i, j).is_zero()) ++j;
        c *= m_(i, j).pow(e[i]);
        out[j] += e[i];
      }
      img = FPoly::monomial(out, c);
    } else {
      img = pair_image(e[0], e[1]) * power(2, e[2]);
    }
    return monomials_.emplace(e, std::move(img)).first->second;
  }

  template <class C>
  SparsePoly<C, 3> apply(const SparsePoly<C, 3>& p) {
    SparsePoly<C, 3> out(p.zero_coefficient());
    for (const auto& [e, c] : p.terms())
      for (const auto& [f, v] : image(e).terms()) out.add_term(f, mul_scalar(c, v));
    return out;
  }

 private:
  const FPoly& power(std::size_t i, unsigned k) {
    auto& v = powers_[i];
    while (v.size() <= k) v.push_back(v.back() * forms_[i]);
    return v[k];
  }
  const FPoly& pair_image(unsigned a, unsigned b) {
    const auto key = std::make_pair(a, b);
    auto it = pairs_.find(key);
    if (it != pairs_.end()) return it->second;
    return pairs_.emplace(key, power(0, a) * power(1, b)).first->second;
  }

  Matrix3 m_;
  bool monomial_;
  std::array<FPoly, 3> forms_;
  std::array<std::vector<FPoly>, 3> powers_;
  std::map<std::pair<unsigned, unsigned>, FPoly> pairs_;
  std::map<Exponent<3>, FPoly, GrlexLess<3>> monomials_;
};

inline FPoly linear_substitution(const FPoly& p, const Matrix3& m) { return LinearSubstitution(m).apply(p); }
inline FPoly linear_substitution(const QPoly& p, const Matrix3& m) {
  return LinearSubstitution(m).apply(lift(p, m.field()));
}
inline PPoly linear_substitution(const PPoly& p, const Matrix3& m) { return LinearSubstitution(m).apply(p); }

template <class P>
using PolyMatrix = std::vector<std::vector<P>>;

namespace detail {

template <class P>
P laplace_det(const PolyMatrix<P>& m, const P& zero) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  P acc = zero;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    PolyMatrix<P> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<P> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    P term = m[0][j] * laplace_det(minor, zero);
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

// Fraction-free Bareiss elimination; every division is exact.
template <class P>
P bareiss_det(PolyMatrix<P> m, const P& zero) {
  const std::size_t n = m.size();
  P prev = one_like(zero);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return zero;
      std::swap(m[p], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        P num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        auto q = divide_exact(num, prev);
        if (!q) throw std::logic_error("bareiss_det: inexact division");
        m[i][j] = std::move(*q);
      }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

}  // namespace detail

/// Determinant of a square polynomial matrix: cofactor expansion up to 4x4,
/// Bareiss beyond.
template <class P>
P poly_matrix_det(const PolyMatrix<P>& m, const P& zero) {
  const std::size_t n = m.size();
  if (n == 0) return one_like(zero);
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("poly_matrix_det: matrix is not square");
  if (n <= 4) return detail::laplace_det(m, zero);
  return detail::bareiss_det(m, zero);
}

/// Coefficients of p as a univariate polynomial in `var`, index = power.
template <class P>
std::vector<P> coefficients_in(const P& p, std::size_t var) {
  const int d = p.degree_in(var);
  std::vector<P> out(d < 0 ? 0 : static_cast<std::size_t>(d) + 1, zero_like(p));
  for (const auto& [e, c] : p.terms()) {
    auto f = e;
    f[var] = 0;
    out[e[var]].add_term(f, c);
  }
  return out;
}

/// Sylvester resultant in `var`. Sign convention: the deg_q rows of p come
/// first, each row listing coefficients from the leading one down.
template <class P>
P resultant_eliminate(const P& p, const P& q, std::size_t var) {
  if (p.is_zero() || q.is_zero()) throw std::invalid_argument("resultant of a zero polynomial");
  const int m = p.degree_in(var), n = q.degree_in(var);
  if (m <= 0 && n <= 0) throw std::invalid_argument("resultant: both polynomials are constant in the variable");
  const P zero = zero_like(p);
  if (m == 0) return p.pow(static_cast<unsigned>(n));
  if (n == 0) return q.pow(static_cast<unsigned>(m));
  const auto pc = coefficients_in(p, var), qc = coefficients_in(q, var);
  const std::size_t size = static_cast<std::size_t>(m + n);
  PolyMatrix<P> syl(size, std::vector<P>(size, zero));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) syl[r][r + k] = pc[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) syl[n + r][r + k] = qc[n - k];
  return detail::bareiss_det(std::move(syl), zero);
}

/// A polynomial in the abstract generators (F, D, C, K).
using GeneratorPoly = SparsePoly<Rational, 4>;

/// Common weighted degree of all terms, nullopt if the terms disagree. The
/// zero polynomial has weighted degree 0 by convention.
inline std::optional<unsigned> weighted_degree(const GeneratorPoly& p, const std::array<unsigned, 4>& weights) {
  std::optional<unsigned> d;
  for (const auto& [e, c] : p.terms()) {
    unsigned w = 0;
    for (std::size_t i = 0; i < 4; ++i) w += e[i] * weights[i];
    if (d && *d != w) return std::nullopt;
    d = w;
  }
  return d.value_or(0);
}

}  // namespace kleincert
