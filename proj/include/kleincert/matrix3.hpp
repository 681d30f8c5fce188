#pragma once

// 3x3 matrices over a cyclotomic field.

#include "kleincert/cyclotomic.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kleincert {

using Vec3 = std::array<FieldElement, 3>;

struct SingularMatrix : std::domain_error {
  SingularMatrix() : std::domain_error("singular matrix") {}
};

class Matrix3 {
 public:
  Matrix3() = default;

  /// Row-major entries; all entries must share one field.
  explicit Matrix3(std::array<FieldElement, 9> entries) : e_(std::move(entries)) {
    for (const auto& x : e_)
      if (!same_field(x.field(), e_[0].field())) throw FieldMismatch("matrix entries over different fields");
  }

  static Matrix3 zero(const FieldPtr& f) {
    std::array<FieldElement, 9> e;
    e.fill(FieldElement(f));
    return Matrix3(std::move(e));
  }
  static Matrix3 identity(const FieldPtr& f) { return scalar(FieldElement(f, 1L)); }
  static Matrix3 scalar(const FieldElement& s) { return diagonal(s, s, s); }
  static Matrix3 diagonal(const FieldElement& a, const FieldElement& b, const FieldElement& c) {
    Matrix3 m = zero(a.field());
    m.e_[0] = a;
    m.e_[4] = b;
    m.e_[8] = c;
    return m;
  }
  /// Integer matrix (e.g. a permutation) lifted into f.
  static Matrix3 from_integers(const FieldPtr& f, const std::array<long, 9>& v) {
    std::array<FieldElement, 9> e;
    for (std::size_t i = 0; i < 9; ++i) e[i] = FieldElement(f, v[i]);
    return Matrix3(std::move(e));
  }

  const FieldElement& operator()(std::size_t i, std::size_t j) const { return e_[3 * i + j]; }
  const std::array<FieldElement, 9>& entries() const noexcept { return e_; }
  const FieldPtr& field() const noexcept { return e_[0].field(); }

  Vec3 row(std::size_t i) const { return {e_[3 * i], e_[3 * i + 1], e_[3 * i + 2]}; }
  Vec3 column(std::size_t j) const { return {e_[j], e_[3 + j], e_[6 + j]}; }

  friend Matrix3 operator*(const Matrix3& a, const Matrix3& b) {
    std::array<FieldElement, 9> out;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        FieldElement acc(a.field());
        for (std::size_t k = 0; k < 3; ++k) {
          const auto& x = a(i, k);
          const auto& y = b(k, j);
          if (!x.is_zero() && !y.is_zero()) acc += x * y;
        }
        out[3 * i + j] = std::move(acc);
      }
    return Matrix3(std::move(out));
  }

  friend Matrix3 operator+(const Matrix3& a, const Matrix3& b) {
    std::array<FieldElement, 9> out;
    for (std::size_t i = 0; i < 9; ++i) out[i] = a.e_[i] + b.e_[i];
    return Matrix3(std::move(out));
  }
  friend Matrix3 operator-(const Matrix3& a, const Matrix3& b) {
    std::array<FieldElement, 9> out;
    for (std::size_t i = 0; i < 9; ++i) out[i] = a.e_[i] - b.e_[i];
    return Matrix3(std::move(out));
  }

  Matrix3 scaled(const FieldElement& s) const {
    std::array<FieldElement, 9> out;
    for (std::size_t i = 0; i < 9; ++i) out[i] = e_[i] * s;
    return Matrix3(std::move(out));
  }

  friend bool operator==(const Matrix3& a, const Matrix3& b) { return a.e_ == b.e_; }

  Vec3 apply(const Vec3& v) const {
    Vec3 out{FieldElement(field()), FieldElement(field()), FieldElement(field())};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 3; ++k)
        if (!e_[3 * i + k].is_zero() && !v[k].is_zero()) out[i] += e_[3 * i + k] * v[k];
    return out;
  }

  Matrix3 transpose() const {
    std::array<FieldElement, 9> out;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) out[3 * j + i] = e_[3 * i + j];
    return Matrix3(std::move(out));
  }

  FieldElement trace() const { return e_[0] + e_[4] + e_[8]; }

  /// Sum of the principal 2x2 minors.
  FieldElement principal_minor_sum() const {
    const auto& m = *this;
    return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) + (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
           (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
  }

  FieldElement det() const {
    const auto& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }

  Matrix3 adjugate() const {
    const auto& m = *this;
    auto cof = [&](std::size_t i, std::size_t j) {
      const std::size_t r0 = i == 0 ? 1 : 0, r1 = i == 2 ? 1 : 2;
      const std::size_t c0 = j == 0 ? 1 : 0, c1 = j == 2 ? 1 : 2;
      FieldElement minor = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
      return ((i + j) % 2 == 0) ? minor : -minor;
    };
    std::array<FieldElement, 9> out;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) out[3 * j + i] = cof(i, j);
    return Matrix3(std::move(out));
  }

  /// Throws SingularMatrix when det = 0.
  Matrix3 inverse() const {
    const FieldElement d = det();
    if (d.is_zero()) throw SingularMatrix();
    return adjugate().scaled(d.inverse());
  }

  /// Coefficients c0..c3 of det(x I - m) = c0 + c1 x + c2 x^2 + x^3.
  std::array<FieldElement, 4> char_poly() const {
    return {-det(), principal_minor_sum(), -trace(), FieldElement(field(), 1L)};
  }

  Matrix3 pow(unsigned k) const {
    Matrix3 result = identity(field()), base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  bool is_identity() const { return *this == identity(field()); }
  bool is_scalar() const {
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j && !(*this)(i, j).is_zero()) return false;
    return e_[0] == e_[4] && e_[4] == e_[8];
  }
  /// Each row has exactly one nonzero entry (diagonal times permutation).
  bool is_monomial() const {
    for (std::size_t i = 0; i < 3; ++i) {
      int nz = 0;
      for (std::size_t j = 0; j < 3; ++j) nz += (*this)(i, j).is_zero() ? 0 : 1;
      if (nz != 1) return false;
    }
    return true;
  }

  std::string key() const {
    std::string s;
    for (const auto& x : e_) {
      s += x.key();
      s += ';';
    }
    return s;
  }

 private:
  std::array<FieldElement, 9> e_;
};

inline Matrix3 embed(const Matrix3& m, const FieldPtr& target) {
  std::array<FieldElement, 9> out;
  for (std::size_t i = 0; i < 9; ++i) out[i] = embed(m.entries()[i], target);
  return Matrix3(std::move(out));
}

inline std::optional<Matrix3> descend(const Matrix3& m, const SubfieldDescent& d) {
  std::array<FieldElement, 9> out;
  for (std::size_t i = 0; i < 9; ++i) {
    auto x = d(m.entries()[i]);
    if (!x) return std::nullopt;
    out[i] = std::move(*x);
  }
  return Matrix3(std::move(out));
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline FieldElement dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline bool is_zero_vector(const Vec3& v) { return v[0].is_zero() && v[1].is_zero() && v[2].is_zero(); }

/// Null space basis by division-free elimination: independent rows are found by
/// cross-multiplied elimination, then the kernel is read off with cross
/// products (rank 2) or 2x2 swaps (rank 1). Empty when m is invertible.
inline std::vector<Vec3> matrix_kernel(const Matrix3& m) {
  const FieldPtr& f = m.field();
  std::vector<Vec3> rows;
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3 r = m.row(i);
    // eliminate against already accepted rows
    for (const auto& acc : rows) {
      std::size_t p = 0;
      while (acc[p].is_zero()) ++p;
      if (r[p].is_zero()) continue;
      const FieldElement a = acc[p], b = r[p];
      for (std::size_t k = 0; k < 3; ++k) r[k] = r[k] * a - acc[k] * b;
    }
    if (!is_zero_vector(r)) {
      bool placed = false;
      // rows stay sorted by pivot column, so pivots remain distinct
      std::size_t p = 0;
      while (r[p].is_zero()) ++p;
      for (auto it = rows.begin(); it != rows.end(); ++it) {
        std::size_t q = 0;
        while ((*it)[q].is_zero()) ++q;
        if (q > p) {
          rows.insert(it, r);
          placed = true;
          break;
        }
      }
      if (!placed) rows.push_back(r);
    }
  }
  const Vec3 zero{FieldElement(f), FieldElement(f), FieldElement(f)};
  auto unit = [&](std::size_t i) {
    Vec3 v = zero;
    v[i] = FieldElement(f, 1L);
    return v;
  };
  switch (rows.size()) {
    case 0:
      return {unit(0), unit(1), unit(2)};
    case 1: {
      const Vec3& r = rows[0];
      std::size_t p = 0;
      while (r[p].is_zero()) ++p;
      std::vector<Vec3> out;
      for (std::size_t j = 0; j < 3; ++j) {
        if (j == p) continue;
        Vec3 v = zero;
        v[j] = r[p];
        v[p] = -r[j];
        out.push_back(v);
      }
      return out;
    }
    case 2: {
      Vec3 v = cross(rows[0], rows[1]);
      if (is_zero_vector(v)) throw std::logic_error("matrix_kernel: dependent rows accepted");
      return {v};
    }
    default:
      return {};
  }
}

/// Least k <= bound with m^k = I, or nullopt.
inline std::optional<unsigned> matrix_order(const Matrix3& m, unsigned bound) {
  const Matrix3 id = Matrix3::identity(m.field());
  Matrix3 p = m;
  for (unsigned k = 1; k <= bound; ++k) {
    if (p == id) return k;
    p = p * m;
  }
  return std::nullopt;
}

}  // namespace kleincert
