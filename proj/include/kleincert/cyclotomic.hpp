#pragma once

// Cyclotomic fields Q(zeta_n) in the power basis 1, zeta, ..., zeta^(phi(n)-1).
//
// Elements are stored as an integer numerator vector over one positive common
// denominator, reduced so that gcd(content, denominator) = 1. That is the
// canonical form: two elements are equal iff their stored data is equal.

#include "kleincert/rational.hpp"
#include "kleincert/ring.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kleincert {

inline unsigned euler_phi(unsigned n) {
  if (n == 0) throw std::invalid_argument("euler_phi(0)");
  unsigned result = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

inline std::vector<unsigned> divisors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

namespace detail {

// Dense integer polynomials, coefficient i multiplies x^i.
using IntPoly = std::vector<Integer>;

inline void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division by a monic divisor; the remainder must vanish.
inline IntPoly divide_monic_exact(IntPoly num, const IntPoly& den) {
  trim(num);
  const std::size_t dd = den.size() - 1;
  if (num.size() < den.size()) {
    if (num.empty()) return {};
    throw std::logic_error("divide_monic_exact: remainder");
  }
  IntPoly q(num.size() - dd, 0);
  for (std::size_t k = num.size(); k-- > dd;) {
    const Integer c = num[k];
    if (c == 0) continue;
    q[k - dd] = c;
    for (std::size_t i = 0; i <= dd; ++i) num[k - dd + i] -= c * den[i];
  }
  trim(num);
  if (!num.empty()) throw std::logic_error("divide_monic_exact: remainder");
  return q;
}

}  // namespace detail

/// Phi_n via Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
inline std::vector<Integer> cyclotomic_polynomial(unsigned n) {
  if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: conductor must be >= 1");
  detail::IntPoly num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (unsigned d = 1; d < n; ++d)
    if (n % d == 0) num = detail::divide_monic_exact(num, cyclotomic_polynomial(d));
  return num;
}

class CyclotomicField {
 public:
  explicit CyclotomicField(unsigned n) : n_(n) {
    if (n == 0) throw std::invalid_argument("cyclotomic field: conductor must be >= 1");
    phi_ = cyclotomic_polynomial(n);
    degree_ = phi_.size() - 1;
    powers_.reserve(n);
    detail::IntPoly cur(degree_, 0);
    cur[0] = 1;
    for (unsigned k = 0; k < n; ++k) {
      powers_.push_back(cur);
      // multiply by x and reduce
      detail::IntPoly next(degree_ + 1, 0);
      for (std::size_t i = 0; i < degree_; ++i) next[i + 1] = cur[i];
      reduce(next);
      cur = std::move(next);
    }
  }

  unsigned conductor() const noexcept { return n_; }
  std::size_t degree() const noexcept { return degree_; }
  /// Monic, low-to-high coefficients, length degree()+1.
  const std::vector<Integer>& minimal_polynomial() const noexcept { return phi_; }

  /// zeta^k reduced, for any integer k.
  const std::vector<Integer>& zeta_power(long k) const {
    long m = k % static_cast<long>(n_);
    if (m < 0) m += n_;
    return powers_[static_cast<std::size_t>(m)];
  }

  /// Reduces p modulo Phi_n in place; result has exactly degree() entries.
  void reduce(std::vector<Integer>& p) const {
    for (std::size_t k = p.size(); k-- > degree_;) {
      if (p[k] == 0) continue;
      const Integer c = p[k];
      for (std::size_t i = 0; i < degree_; ++i)
        if (phi_[i] != 0) mpz_submul(p[k - degree_ + i].get_mpz_t(), c.get_mpz_t(), phi_[i].get_mpz_t());
      p[k] = 0;
    }
    p.resize(degree_, 0);
  }

 private:
  unsigned n_;
  std::size_t degree_ = 0;
  std::vector<Integer> phi_;
  std::vector<std::vector<Integer>> powers_;
};

using FieldPtr = std::shared_ptr<const CyclotomicField>;

inline FieldPtr field_make(unsigned n) { return std::make_shared<const CyclotomicField>(n); }

inline bool same_field(const FieldPtr& a, const FieldPtr& b) {
  return a && b && (a == b || a->conductor() == b->conductor());
}

class FieldElement {
 public:
  /// Detached placeholder (no field). Only assignment and is_zero() are valid.
  FieldElement() = default;

  explicit FieldElement(FieldPtr f) : field_(std::move(f)) { require_field(); num_.assign(field_->degree(), 0); }

  FieldElement(FieldPtr f, const Rational& r) : FieldElement(std::move(f)) {
    num_[0] = r.get_num();
    den_ = r.get_den();
  }

  FieldElement(FieldPtr f, long v) : FieldElement(std::move(f)) { num_[0] = v; }

  static FieldElement from_coords(FieldPtr f, std::span<const Rational> coords) {
    FieldElement out(std::move(f));
    if (coords.size() != out.num_.size())
      throw std::invalid_argument("field element: expected " + std::to_string(out.num_.size()) +
                                  " coordinates, got " + std::to_string(coords.size()));
    Integer den = 1;
    for (const auto& c : coords) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    for (std::size_t i = 0; i < coords.size(); ++i) out.num_[i] = coords[i].get_num() * (den / coords[i].get_den());
    out.den_ = den;
    out.normalize();
    return out;
  }

  static FieldElement from_integers(FieldPtr f, std::vector<Integer> num, Integer den = 1) {
    FieldElement out(std::move(f));
    out.field_->reduce(num);
    out.num_ = std::move(num);
    out.den_ = std::move(den);
    if (out.den_ == 0) throw DivisionByZero();
    out.normalize();
    return out;
  }

  /// zeta_n^k.
  static FieldElement zeta(FieldPtr f, long k) {
    FieldElement out(f);
    out.num_ = f->zeta_power(k);
    return out;
  }

  const FieldPtr& field() const noexcept { return field_; }
  unsigned conductor() const { return require_field(), field_->conductor(); }
  std::size_t degree() const { return num_.size(); }

  std::vector<Rational> coords() const {
    std::vector<Rational> out;
    out.reserve(num_.size());
    for (const auto& c : num_) {
      Rational r(c, den_);
      r.canonicalize();
      out.push_back(std::move(r));
    }
    return out;
  }

  const std::vector<Integer>& numerators() const noexcept { return num_; }
  const Integer& denominator() const noexcept { return den_; }

  bool is_zero() const noexcept {
    for (const auto& c : num_)
      if (c != 0) return false;
    return true;
  }
  bool is_rational() const noexcept {
    for (std::size_t i = 1; i < num_.size(); ++i)
      if (num_[i] != 0) return false;
    return true;
  }
  bool is_one() const noexcept { return is_rational() && !num_.empty() && num_[0] == den_; }

  /// Throws std::domain_error unless the element is rational.
  Rational rational_value() const {
    if (!is_rational()) throw std::domain_error("field element is not rational");
    Rational r(num_.empty() ? Integer(0) : num_[0], den_);
    r.canonicalize();
    return r;
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return same_field(a.field_, b.field_) && a.den_ == b.den_ && a.num_ == b.num_;
  }

  FieldElement operator-() const {
    FieldElement out(*this);
    for (auto& c : out.num_) c = -c;
    return out;
  }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    FieldElement out(a.field_, std::vector<Integer>(a.num_.size()), 1);
    if (a.den_ == b.den_) {
      for (std::size_t i = 0; i < a.num_.size(); ++i) out.num_[i] = a.num_[i] + b.num_[i];
      out.den_ = a.den_;
    } else {
      for (std::size_t i = 0; i < a.num_.size(); ++i) out.num_[i] = a.num_[i] * b.den_ + b.num_[i] * a.den_;
      out.den_ = a.den_ * b.den_;
    }
    out.normalize();
    return out;
  }

  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    const std::size_t n = a.num_.size();
    if (a.is_zero() || b.is_zero()) return FieldElement(a.field_);
    std::vector<Integer> prod(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.num_[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (b.num_[j] != 0) mpz_addmul(prod[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
    }
    a.field_->reduce(prod);
    FieldElement out(a.field_, std::move(prod), a.den_ * b.den_);
    out.normalize();
    return out;
  }

  friend FieldElement operator*(const FieldElement& a, const Rational& r) {
    a.require_field();
    if (sgn(r) == 0) return FieldElement(a.field_);
    FieldElement out(a);
    for (auto& c : out.num_) c *= r.get_num();
    out.den_ *= r.get_den();
    out.normalize();
    return out;
  }
  friend FieldElement operator*(const Rational& r, const FieldElement& a) { return a * r; }
  friend FieldElement operator*(const FieldElement& a, long v) { return a * Rational(v); }
  friend FieldElement operator*(long v, const FieldElement& a) { return a * Rational(v); }

  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

  /// Extended Euclid against Phi_n over Q[x].
  FieldElement inverse() const {
    require_field();
    if (is_zero()) throw DivisionByZero();
    if (is_rational()) return FieldElement(field_, Rational(1) / rational_value());
    using QPoly = std::vector<Rational>;
    auto trimq = [](QPoly& p) {
      while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
    };
    auto sub_scaled_shift = [&](QPoly& r, const QPoly& d, const Rational& c, std::size_t shift) {
      if (r.size() < d.size() + shift) r.resize(d.size() + shift, Rational(0));
      for (std::size_t i = 0; i < d.size(); ++i) r[i + shift] -= c * d[i];
    };
    QPoly r0(field_->minimal_polynomial().begin(), field_->minimal_polynomial().end());
    QPoly r1(num_.begin(), num_.end());
    trimq(r1);
    QPoly s0, s1{Rational(1)};
    while (!r1.empty()) {
      QPoly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0, Rational(0));
      QPoly rem = r0;
      while (rem.size() >= r1.size() && !rem.empty()) {
        const std::size_t shift = rem.size() - r1.size();
        const Rational c = rem.back() / r1.back();
        q[shift] += c;
        sub_scaled_shift(rem, r1, c, shift);
        rem.pop_back();
        trimq(rem);
      }
      QPoly s2 = s0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (sgn(q[i]) == 0) continue;
        sub_scaled_shift(s2, s1, q[i], i);
      }
      trimq(s2);
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 is a nonzero constant because Phi_n is irreducible.
    const Rational g = r0.at(0);
    std::vector<Rational> coords(num_.size(), Rational(0));
    for (std::size_t i = 0; i < s0.size() && i < coords.size(); ++i) coords[i] = s0[i] / g;
    // stored value is num/den, so the inverse of (num/den) is den * inverse(num)
    return from_coords(field_, coords) * Rational(den_);
  }

  FieldElement pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement result(field_, 1L), base(*this);
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Canonical textual key, suitable for hashing and ordering.
  std::string key() const {
    std::string s = std::to_string(conductor()) + ":" + den_.get_str();
    for (const auto& c : num_) {
      s += ',';
      s += c.get_str();
    }
    return s;
  }

  std::complex<double> to_complex() const {
    require_field();
    const double n = field_->conductor();
    std::complex<double> acc = 0;
    for (std::size_t k = 0; k < num_.size(); ++k) {
      if (num_[k] == 0) continue;
      acc += num_[k].get_d() * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / n);
    }
    return acc / den_.get_d();
  }

 private:
  FieldElement(FieldPtr f, std::vector<Integer> num, Integer den)
      : field_(std::move(f)), num_(std::move(num)), den_(std::move(den)) {}

  void require_field() const {
    if (!field_) throw std::logic_error("operation on a detached field element");
  }
  void check_same(const FieldElement& b) const {
    require_field();
    b.require_field();
    if (!same_field(field_, b.field_))
      throw FieldMismatch("field mismatch: Q(zeta_" + std::to_string(field_->conductor()) + ") vs Q(zeta_" +
                          std::to_string(b.field_->conductor()) + ")");
  }

  void normalize() {
    if (den_ < 0) {
      den_ = -den_;
      for (auto& c : num_) c = -c;
    }
    if (den_ == 1) return;
    Integer g = den_;
    for (const auto& c : num_) {
      if (c == 0) continue;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return;
    }
    if (is_zero()) {
      den_ = 1;
      return;
    }
    for (auto& c : num_)
      if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }

  FieldPtr field_;
  std::vector<Integer> num_;
  Integer den_{1};
};

template <>
struct ring_traits<FieldElement> {
  static bool is_zero(const FieldElement& x) { return x.is_zero(); }
  static FieldElement zero_like(const FieldElement& x) { return FieldElement(x.field()); }
  static FieldElement one_like(const FieldElement& x) { return FieldElement(x.field(), 1L); }
  static FieldElement from_rational(const FieldElement& proto, const Rational& r) {
    return FieldElement(proto.field(), r);
  }
};

struct FieldElementHash {
  std::size_t operator()(const FieldElement& x) const { return std::hash<std::string>{}(x.key()); }
};

/// A primitive M-th root of unity raised to k, inside f. Needs M | n, or n odd
/// and M | 2n (Q(zeta_n) = Q(zeta_2n) then).
inline FieldElement root_of_unity(const FieldPtr& f, unsigned order, long k) {
  const unsigned n = f->conductor();
  if (order == 0) throw std::invalid_argument("root_of_unity: order 0");
  if (n % order == 0) return FieldElement::zeta(f, static_cast<long>(n / order) * k);
  if (n % 2 == 1 && (2 * n) % order == 0) {
    // zeta_2n = -zeta_n^((n+1)/2)
    const long step = static_cast<long>(2 * n / order) * k;
    FieldElement z = FieldElement::zeta(f, static_cast<long>((n + 1) / 2) * step);
    return (step % 2 == 0) ? z : -z;
  }
  throw std::invalid_argument("root_of_unity: Q(zeta_" + std::to_string(n) + ") has no primitive " +
                              std::to_string(order) + "-th root of unity");
}

/// The largest M such that zeta_M lies in f (n, or 2n when n is odd).
inline unsigned roots_of_unity_order(const FieldPtr& f) {
  const unsigned n = f->conductor();
  return n % 2 == 1 ? 2 * n : n;
}

/// Natural embedding Q(zeta_n) -> Q(zeta_m), zeta_n -> zeta_m^(m/n). Needs n | m.
inline FieldElement embed(const FieldElement& x, const FieldPtr& target) {
  const unsigned n = x.conductor(), m = target->conductor();
  if (n == m) return x;
  if (m % n != 0)
    throw FieldMismatch("cannot embed Q(zeta_" + std::to_string(n) + ") into Q(zeta_" + std::to_string(m) + ")");
  const long step = m / n;
  std::vector<Integer> num(target->degree(), 0);
  const auto& src = x.numerators();
  for (std::size_t j = 0; j < src.size(); ++j) {
    if (src[j] == 0) continue;
    const auto& pw = target->zeta_power(step * static_cast<long>(j));
    for (std::size_t i = 0; i < num.size(); ++i)
      if (pw[i] != 0) mpz_addmul(num[i].get_mpz_t(), src[j].get_mpz_t(), pw[i].get_mpz_t());
  }
  return FieldElement::from_integers(target, std::move(num), x.denominator());
}

/// Membership test and coordinates for the subfield Q(zeta_d) inside Q(zeta_n),
/// d | n. Build once, apply to many elements.
class SubfieldDescent {
 public:
  SubfieldDescent(FieldPtr big, FieldPtr small) : big_(std::move(big)), small_(std::move(small)) {
    const unsigned n = big_->conductor(), d = small_->conductor();
    if (n % d != 0) throw FieldMismatch("descent target conductor must divide the source conductor");
    const std::size_t rows = big_->degree(), cols = small_->degree();
    // columns: images of the small power basis
    std::vector<std::vector<Rational>> e(rows, std::vector<Rational>(cols));
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& pw = big_->zeta_power(static_cast<long>(n / d) * static_cast<long>(j));
      for (std::size_t i = 0; i < rows; ++i) e[i][j] = pw[i];
    }
    embedding_ = e;
    // choose pivot rows; invert the square submatrix by Gauss-Jordan
    std::vector<std::size_t> pivots;
    std::vector<bool> used(rows, false);
    // greedy pivot rows, found by elimination on a copy
    {
      auto m = e;
      std::size_t col = 0;
      for (; col < cols; ++col) {
        std::size_t p = rows;
        for (std::size_t i = 0; i < rows; ++i)
          if (!used[i] && sgn(m[i][col]) != 0) {
            p = i;
            break;
          }
        if (p == rows) throw std::logic_error("SubfieldDescent: embedding not injective");
        used[p] = true;
        pivots.push_back(p);
        for (std::size_t i = 0; i < rows; ++i) {
          if (i == p || sgn(m[i][col]) == 0) continue;
          const Rational c = m[i][col] / m[p][col];
          for (std::size_t k = col; k < cols; ++k) m[i][k] -= c * m[p][k];
        }
      }
    }
    pivots_ = pivots;
    // invert S = e[pivots, :]
    std::vector<std::vector<Rational>> s(cols, std::vector<Rational>(2 * cols, Rational(0)));
    for (std::size_t i = 0; i < cols; ++i) {
      for (std::size_t j = 0; j < cols; ++j) s[i][j] = e[pivots[i]][j];
      s[i][cols + i] = 1;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t p = c;
      while (sgn(s[p][c]) == 0) ++p;
      std::swap(s[p], s[c]);
      const Rational inv = Rational(1) / s[c][c];
      for (auto& v : s[c]) v *= inv;
      for (std::size_t i = 0; i < cols; ++i) {
        if (i == c || sgn(s[i][c]) == 0) continue;
        const Rational f = s[i][c];
        for (std::size_t k = 0; k < 2 * cols; ++k) s[i][k] -= f * s[c][k];
      }
    }
    inverse_.assign(cols, std::vector<Rational>(cols));
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j) inverse_[i][j] = s[i][cols + j];
  }

  const FieldPtr& source() const noexcept { return big_; }
  const FieldPtr& target() const noexcept { return small_; }

  std::optional<FieldElement> operator()(const FieldElement& x) const {
    if (!same_field(x.field(), big_)) throw FieldMismatch("SubfieldDescent: element from the wrong field");
    if (x.is_rational()) return FieldElement(small_, x.rational_value());
    const auto c = x.coords();
    const std::size_t cols = small_->degree();
    std::vector<Rational> a(cols, Rational(0));
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(inverse_[i][j]) != 0) a[i] += inverse_[i][j] * c[pivots_[j]];
    for (std::size_t r = 0; r < embedding_.size(); ++r) {
      Rational v = 0;
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(embedding_[r][j]) != 0) v += embedding_[r][j] * a[j];
      if (v != c[r]) return std::nullopt;
    }
    return FieldElement::from_coords(small_, a);
  }

 private:
  FieldPtr big_, small_;
  std::vector<std::vector<Rational>> embedding_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<Rational>> inverse_;
};

/// Smallest conductor d | n such that every element lies in Q(zeta_d).
inline unsigned minimal_conductor(std::span<const FieldElement> xs) {
  if (xs.empty()) return 1;
  const FieldPtr& big = xs.front().field();
  for (unsigned d : divisors(big->conductor())) {
    if (d == big->conductor()) return d;
    SubfieldDescent desc(big, field_make(d));
    bool ok = true;
    for (const auto& x : xs)
      if (!desc(x)) {
        ok = false;
        break;
      }
    if (ok) return d;
  }
  return big->conductor();
}

}  // namespace kleincert
