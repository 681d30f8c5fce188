#pragma once

// Local analysis of plane curves at exactly represented points.
//
// Curves are PPoly: homogeneous in y1, y2, y3 with coefficients that are
// polynomials in the pencil parameters lambda, mu, nu. A parameter
// polynomial that is not identically zero is treated as nonzero and the
// condition is recorded as an assumption.

#include "kleincert/binary_form.hpp"
#include "kleincert/invariants.hpp"
#include "kleincert/orbits.hpp"
#include "kleincert/poly_ops.hpp"
#include "kleincert/serialize.hpp"

#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace kleincert {

using LocalPoly = SparsePoly<ParamPoly, 2>;  // local coordinates (u, v)

inline constexpr std::array<const char*, 3> kParamNames{"lambda", "mu", "nu"};

inline ParamPoly param_zero(const FieldPtr& f) { return ParamPoly(FieldElement(f)); }
inline ParamPoly param_var(std::size_t i, const FieldPtr& f) { return ParamPoly::variable(i, FieldElement(f)); }
inline ParamPoly param_const(const FieldElement& c) { return ParamPoly::constant(c); }

inline std::string coefficient_string(const FieldElement& c) {
  if (c.is_rational()) return c.rational_value().get_str();
  std::ostringstream s;
  s << "[";
  const auto coords = c.coords();
  for (std::size_t i = 0; i < coords.size(); ++i) s << (i ? "," : "") << coords[i].get_str();
  s << "]_zeta" << c.field()->conductor();
  return s.str();
}

inline std::string param_string(const ParamPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mon;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!e[i]) continue;
      if (!mon.empty()) mon += "*";
      mon += kParamNames[i];
      if (e[i] > 1) mon += "^" + std::to_string(e[i]);
    }
    std::string coef = coefficient_string(c);
    bool neg = false;
    if (c.is_rational() && sgn(c.rational_value()) < 0) {
      neg = true;
      coef = coefficient_string(-c);
    }
    std::string term = mon.empty() ? coef : (coef == "1" ? mon : coef + "*" + mon);
    if (out.empty())
      out = (neg ? "-" : "") + term;
    else
      out += (neg ? " - " : " + ") + term;
  }
  return out;
}

/// Non-vanishing conditions on the parameters, kept canonical and sorted.
class Assumptions {
 public:
  /// Records c != 0. Constant c must be nonzero; a monomial factor is split
  /// into one condition per parameter.
  void require_nonzero(const ParamPoly& c) {
    if (c.is_zero()) throw std::logic_error("Assumptions: required a zero parameter polynomial to be nonzero");
    if (c.is_constant()) return;
    Exponent<3> low{~0u, ~0u, ~0u};
    for (const auto& [e, v] : c.terms())
      for (std::size_t i = 0; i < 3; ++i) low[i] = std::min(low[i], e[i]);
    ParamPoly rest(c.zero_coefficient());
    for (const auto& [e, v] : c.terms()) rest.add_term({e[0] - low[0], e[1] - low[1], e[2] - low[2]}, v);
    for (std::size_t i = 0; i < 3; ++i)
      if (low[i]) items_.insert(std::string(kParamNames[i]) + " != 0");
    if (!rest.is_constant()) {
      const FieldElement lead = rest.leading().second.inverse();
      items_.insert(param_string(rest.scaled(lead)) + " != 0");
    }
  }
  void merge(const Assumptions& o) { items_.insert(o.items_.begin(), o.items_.end()); }
  bool empty() const { return items_.empty(); }
  bool contains(const std::string& s) const { return items_.count(s) > 0; }
  std::vector<std::string> list() const { return {items_.begin(), items_.end()}; }

 private:
  std::set<std::string> items_;
};

// ---- curves and fields ----

inline PPoly curve_from(const QPoly& p) { return lift_params(p, field_make(1)); }

/// sum_i param_i * member_i over Q; a single member gets no parameter.
inline PPoly family_curve(const PsiFamily& fam, const KleinInvariants& inv) {
  const FieldPtr q = field_make(1);
  if (fam.monomials.size() > 3) throw std::invalid_argument("family_curve: more than three parameters");
  PPoly out(param_zero(q));
  for (std::size_t i = 0; i < fam.monomials.size(); ++i) {
    const ParamPoly coef = fam.monomials.size() == 1 ? param_const(FieldElement(q, 1L)) : param_var(i, q);
    const PPoly m = lift_params(family_member(fam.monomials[i], inv), q);
    for (const auto& [e, c] : m.terms()) out.add_term(e, c * coef);
  }
  return out;
}

inline const FieldPtr& curve_field(const PPoly& p) { return p.zero_coefficient().zero_coefficient().field(); }

inline PPoly lift_curve(const PPoly& p, const FieldPtr& f) {
  if (same_field(curve_field(p), f)) return p;
  return p.map_coefficients(param_zero(f), [&](const ParamPoly& c) { return lift(c, f); });
}

/// Substitutes concrete values for the parameters.
inline PPoly instantiate(const PPoly& p, const std::array<Rational, 3>& values) {
  const FieldPtr& f = curve_field(p);
  const std::array<FieldElement, 3> v{FieldElement(f, values[0]), FieldElement(f, values[1]), FieldElement(f, values[2])};
  PPoly out(param_zero(f));
  for (const auto& [e, c] : p.terms()) {
    const FieldElement x = c.evaluate(v, FieldElement(f));
    if (!x.is_zero()) out.add_term(e, param_const(x));
  }
  return out;
}

inline bool is_parametric(const PPoly& p) {
  for (const auto& [e, c] : p.terms())
    if (!c.is_constant()) return true;
  return false;
}

inline unsigned common_conductor(const FieldPtr& a, const FieldPtr& b) {
  unsigned n = std::lcm(a->conductor(), b->conductor());
  if (n % 4 == 2) n /= 2;
  return n;
}

/// p(q) as a parameter polynomial.
inline ParamPoly evaluate_at(const PPoly& p, const ProjPoint& q) {
  const FieldPtr f = field_make(common_conductor(curve_field(p), q.field()));
  const PPoly pp = lift_curve(p, f);
  const ProjPoint qq = same_field(q.field(), f) ? q : q.embedded(f);
  std::array<std::vector<FieldElement>, 3> pw;
  for (std::size_t i = 0; i < 3; ++i) pw[i].push_back(FieldElement(f, 1L));
  auto power = [&](std::size_t i, unsigned k) -> const FieldElement& {
    while (pw[i].size() <= k) pw[i].push_back(pw[i].back() * qq[i]);
    return pw[i][k];
  };
  ParamPoly acc = param_zero(f);
  for (const auto& [e, c] : pp.terms()) {
    const FieldElement m = power(0, e[0]) * power(1, e[1]) * power(2, e[2]);
    if (!m.is_zero()) acc += c.scaled(m);
  }
  return acc;
}

// ---- charts ----

struct Chart {
  Matrix3 change;  // global y = change * local y'; column 0 is the point
  LocalPoly poly;  // p(change * (1, u, v))
};

/// Sends (1:0:0) to q by M = [q | e_j | e_k], j < k the coordinates other
/// than q's first nonzero one; `frame` replaces e_j, e_k.
inline Matrix3 chart_matrix(const ProjPoint& q, const std::optional<std::array<Vec3, 2>>& frame = std::nullopt) {
  const FieldPtr& f = q.field();
  std::array<Vec3, 2> cols;
  if (frame) {
    cols = *frame;
  } else {
    std::size_t i = 0;
    while (q[i].is_zero()) ++i;
    std::size_t k = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == i) continue;
      Vec3 e{FieldElement(f), FieldElement(f), FieldElement(f)};
      e[j] = FieldElement(f, 1L);
      cols[k++] = e;
    }
  }
  std::array<FieldElement, 9> m{FieldElement(f), FieldElement(f), FieldElement(f), FieldElement(f), FieldElement(f),
                                FieldElement(f), FieldElement(f), FieldElement(f), FieldElement(f)};
  for (std::size_t r = 0; r < 3; ++r) {
    m[3 * r] = q[r];
    m[3 * r + 1] = embed(cols[0][r], f);
    m[3 * r + 2] = embed(cols[1][r], f);
  }
  Matrix3 out(m);
  if (out.det().is_zero()) throw std::invalid_argument("chart_matrix: frame does not complete the point to a basis");
  return out;
}

inline Chart localize(const PPoly& p, const ProjPoint& q0, const std::optional<std::array<Vec3, 2>>& frame = std::nullopt) {
  if (!p.is_zero() && !p.is_homogeneous()) throw std::invalid_argument("localize: polynomial not homogeneous");
  const FieldPtr f = field_make(common_conductor(curve_field(p), q0.field()));
  const ProjPoint q = same_field(q0.field(), f) ? q0 : q0.embedded(f);
  const Matrix3 m = chart_matrix(q, frame);
  const PPoly g = linear_substitution(lift_curve(p, f), m);
  LocalPoly loc(param_zero(f));
  for (const auto& [e, c] : g.terms()) loc.add_term({e[1], e[2]}, c);
  return {m, std::move(loc)};
}

inline LocalPoly local_component(const LocalPoly& p, unsigned k) { return p.homogeneous_component(k); }

inline ParamPoly local_coefficient(const LocalPoly& p, unsigned a, unsigned b) { return p.coefficient({a, b}); }

/// Records that some coefficient of a nonzero parametric form is nonzero:
/// free when one coefficient is a nonzero constant.
inline void require_nonzero_form(const LocalPoly& h, Assumptions& as) {
  for (const auto& [e, c] : h.terms())
    if (c.is_constant()) return;
  as.require_nonzero(h.terms().rbegin()->second);
}

// ---- local data ----

enum class DoublePoint { node, cusp, worse };

inline const char* to_string(DoublePoint t) {
  switch (t) {
    case DoublePoint::node: return "node";
    case DoublePoint::cusp: return "cusp(A2)";
    default: return "worse";
  }
}

struct LocalData {
  ProjPoint point;
  unsigned multiplicity = 0;
  BinaryForm<ParamPoly> tangent_cone;
  std::optional<DoublePoint> double_point_type;
  Assumptions assumptions;
  Matrix3 change;
};

struct MultiplicityResult {
  unsigned value = 0;
  Assumptions assumptions;
};

inline MultiplicityResult multiplicity_of(const LocalPoly& loc) {
  if (loc.is_zero()) throw std::invalid_argument("multiplicity: zero polynomial");
  MultiplicityResult r;
  r.value = static_cast<unsigned>(loc.low_degree());
  require_nonzero_form(local_component(loc, r.value), r.assumptions);
  return r;
}

inline MultiplicityResult multiplicity_at(const PPoly& p, const ProjPoint& q) {
  if (p.is_zero()) throw std::invalid_argument("multiplicity_at: zero polynomial");
  return multiplicity_of(localize(p, q).poly);
}

inline BinaryForm<ParamPoly> local_form(const LocalPoly& p, unsigned k) {
  return BinaryForm<ParamPoly>::from_poly(local_component(p, k), k, 0, 1);
}

struct DoublePointResult {
  DoublePoint type = DoublePoint::worse;
  Assumptions assumptions;
};

/// Tangent cone a u^2 + b uv + c v^2. Distinct lines give a node. A double
/// line l^2 gives A2 exactly when the cubic part does not vanish on the
/// tangent direction (completing the square leaves that value as the
/// coefficient of the cube of the transverse coordinate).
inline DoublePointResult classify_double_point(const LocalPoly& loc) {
  const auto m = multiplicity_of(loc);
  if (m.value != 2) throw std::invalid_argument("classify_double_point: multiplicity is " + std::to_string(m.value));
  DoublePointResult r;
  r.assumptions = m.assumptions;
  const ParamPoly a = local_coefficient(loc, 2, 0), b = local_coefficient(loc, 1, 1), c = local_coefficient(loc, 0, 2);
  const ParamPoly disc = b * b - a * c * param_const(FieldElement(a.zero_coefficient().field(), 4L));
  if (!disc.is_zero()) {
    r.assumptions.require_nonzero(disc);
    r.type = DoublePoint::node;
    return r;
  }
  ParamPoly du = param_zero(a.zero_coefficient().field()), dv = du;
  if (!a.is_zero()) {
    r.assumptions.require_nonzero(a);
    du = -b;
    dv = a + a;
  } else {
    du = param_const(FieldElement(a.zero_coefficient().field(), 1L));
  }
  const auto cubic = local_form(loc, 3);
  const ParamPoly val = cubic.evaluate(du, dv);
  if (val.is_zero()) {
    r.type = DoublePoint::worse;
    return r;
  }
  r.assumptions.require_nonzero(val);
  r.type = DoublePoint::cusp;
  return r;
}

inline LocalData analyze_point(const PPoly& p, const ProjPoint& q,
                               const std::optional<std::array<Vec3, 2>>& frame = std::nullopt) {
  const Chart ch = localize(p, q, frame);
  const auto m = multiplicity_of(ch.poly);
  LocalData d{q, m.value, local_form(ch.poly, m.value), std::nullopt, m.assumptions, ch.change};
  if (m.value == 2) {
    auto c = classify_double_point(ch.poly);
    d.double_point_type = c.type;
    d.assumptions.merge(c.assumptions);
  }
  return d;
}

// ---- intersection numbers ----

class CommonComponent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntersectionResult {
  unsigned value = 0;
  Assumptions assumptions;
};

inline std::string linear_form_string(const Vec3& a) {
  static const char* y[3] = {"y1", "y2", "y3"};
  std::string s;
  for (std::size_t i = 0; i < 3; ++i) {
    if (a[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + coefficient_string(a[i]) + ")*" + y[i];
  }
  return s;
}

/// Fulton's recursion at the origin of the (u, v) chart: restrict to v = 0,
/// cancel leading terms of the restrictions, and split off v when a
/// restriction vanishes. `chart` is used only to name a common line.
inline IntersectionResult intersection_multiplicity_local(LocalPoly a, LocalPoly b, const Matrix3* chart = nullptr,
                                                          std::size_t cap = 100000) {
  IntersectionResult r;
  if (a.is_zero() || b.is_zero()) throw CommonComponent("intersection with the zero polynomial");
  const FieldPtr f = a.zero_coefficient().zero_coefficient().field();
  auto restriction = [](const LocalPoly& p) {
    std::map<unsigned, ParamPoly> out;
    for (const auto& [e, c] : p.terms())
      if (e[1] == 0) out.emplace(e[0], c);
    return out;
  };
  for (std::size_t step = 0; step < cap; ++step) {
    const ParamPoly ca = a.constant_term(), cb = b.constant_term();
    if (!ca.is_zero() || !cb.is_zero()) {
      const bool unit = (!ca.is_zero() && ca.is_constant()) || (!cb.is_zero() && cb.is_constant());
      if (!unit) r.assumptions.require_nonzero(!ca.is_zero() ? ca : cb);
      return r;
    }
    auto ra = restriction(a), rb = restriction(b);
    if (ra.empty() && rb.empty()) {
      std::string name = "v = 0 in the local chart";
      if (chart) {
        // the line v' = 0 is the third row of the inverse chart matrix
        name = linear_form_string(chart->inverse().row(2));
      }
      throw CommonComponent("common component through the point: " + name);
    }
    if (ra.empty()) {
      std::swap(a, b);
      std::swap(ra, rb);
    }
    if (rb.empty()) {
      // b = v * h; I(v, a) = ord_u a(u, 0)
      const auto& [k, low] = *ra.begin();
      r.assumptions.require_nonzero(low);
      r.value += k;
      LocalPoly h(param_zero(f));
      for (const auto& [e, c] : b.terms()) h.add_term({e[0], e[1] - 1}, c);
      b = std::move(h);
      continue;
    }
    unsigned da = ra.rbegin()->first, db = rb.rbegin()->first;
    if (da > db) {
      std::swap(a, b);
      std::swap(ra, rb);
      std::swap(da, db);
    }
    const ParamPoly lead_a = ra.rbegin()->second, lead_b = rb.rbegin()->second;
    const LocalPoly shifted = a.shifted({db - da, 0});
    if (lead_a.is_constant()) {
      const FieldElement inv = lead_a.constant_term().inverse();
      b -= shifted.scaled(lead_b.scaled(inv));
    } else {
      r.assumptions.require_nonzero(lead_a);
      b = b.scaled(lead_a) - shifted.scaled(lead_b);
    }
    if (b.is_zero()) throw CommonComponent("common component through the point (one curve divides the other)");
  }
  throw CommonComponent("intersection recursion did not terminate: common component suspected");
}

inline IntersectionResult intersection_multiplicity(const PPoly& a, const PPoly& b, const ProjPoint& q,
                                                    const std::optional<std::array<Vec3, 2>>& frame = std::nullopt) {
  const Chart ca = localize(a, q, frame), cb = localize(b, q, frame);
  return intersection_multiplicity_local(ca.poly, cb.poly, &ca.change);
}

/// Homogeneous resultant of two binary forms (zero iff a common root in P^1).
inline ParamPoly binary_resultant(const BinaryForm<ParamPoly>& a, const BinaryForm<ParamPoly>& b) {
  const std::size_t m = a.degree(), n = b.degree();
  const ParamPoly zero(a.coeff(0).zero_coefficient());
  if (m + n == 0) return one_like(zero);
  PolyMatrix<ParamPoly> s(m + n, std::vector<ParamPoly>(m + n, zero));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) s[r][r + k] = a.coeff(static_cast<unsigned>(m - k));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) s[n + r][r + k] = b.coeff(static_cast<unsigned>(n - k));
  return poly_matrix_det(s, zero);
}

// ---- Bezout ----

struct BezoutEntry {
  std::size_t orbit_length = 0;
  unsigned local_index = 0;
};

struct BezoutResult {
  bool consistent = false;
  long total = 0;
  long expected = 0;
  std::vector<BezoutEntry> entries;
  Assumptions assumptions;
};

class PointNotOnCurves : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sums orbit length times the local index at the representative (checked
/// to agree at up to `spot` further points); consistent iff the sum is
/// deg a * deg b, in which case the orbits carry the whole intersection.
inline BezoutResult bezout_audit(const PPoly& a, const PPoly& b, const std::vector<const Orbit*>& orbits,
                                 std::size_t spot = 2) {
  BezoutResult r;
  r.expected = static_cast<long>(a.degree()) * b.degree();
  for (const Orbit* o : orbits) {
    for (const auto& x : o->points)
      if (!evaluate_at(a, x).is_zero() || !evaluate_at(b, x).is_zero())
        throw PointNotOnCurves("bezout_audit: orbit point not on both curves");
    const ProjPoint rep = o->representative.descended(o->representative.minimal_conductor());
    auto i = intersection_multiplicity(a, b, rep);
    const std::size_t step = std::max<std::size_t>(1, o->points.size() / (spot + 1));
    for (std::size_t k = 1; k <= spot && k * step < o->points.size(); ++k) {
      const auto& x = o->points[k * step];
      const auto j = intersection_multiplicity(a, b, x.descended(x.minimal_conductor()));
      if (j.value != i.value) throw std::logic_error("bezout_audit: local index differs along an orbit");
    }
    r.assumptions.merge(i.assumptions);
    r.entries.push_back({o->length(), i.value});
    r.total += static_cast<long>(o->length()) * i.value;
  }
  r.consistent = r.total == r.expected;
  return r;
}

// ---- smoothness ----

class NotSquarefree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SmoothnessCertificate {
  bool smooth = false;
  std::optional<ProjPoint> witness;
  std::string detail;  // unresolved eliminant or the changes used
  std::vector<Matrix3> changes;
  std::size_t attempts = 0;
};

inline Matrix3 random_change(const FieldPtr& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-4, 4);
  for (;;) {
    std::array<long, 9> e{};
    for (auto& x : e) x = d(rng);
    const Matrix3 m = Matrix3::from_integers(f, e);
    if (!m.det().is_zero()) return m;
  }
}

namespace detail {

inline std::vector<FieldElement> dense_derivative(const std::vector<FieldElement>& p) {
  std::vector<FieldElement> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  return d;
}

inline std::vector<FieldElement> dense_quotient(std::vector<FieldElement> a, const std::vector<FieldElement>& b) {
  trim_dense(a);
  if (a.size() < b.size()) return {};
  std::vector<FieldElement> q(a.size() - b.size() + 1, FieldElement(a[0].field()));
  while (a.size() >= b.size() && !a.empty()) {
    const FieldElement c = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - c * b[i];
    a.pop_back();
    trim_dense(a);
  }
  return q;
}

/// Univariate y3-polynomial p(x0, y0, y3).
inline std::vector<FieldElement> restrict_to(const FPoly& p, const FieldElement& x0, const FieldElement& y0) {
  std::vector<FieldElement> out(static_cast<std::size_t>(std::max(0, p.degree_in(2))) + 1, FieldElement(x0.field()));
  for (const auto& [e, c] : p.terms()) out[e[2]] += c * x0.pow(e[0]) * y0.pow(e[1]);
  trim_dense(out);
  return out;
}

}  // namespace detail

/// Iterated resultants of the partials after seeded random changes: p is
/// smooth when Res_y3(p1, p2) and Res_y3(p1, p3) are coprime binary forms in
/// two independent generic changes. A change is generic when p and its
/// partials keep constant leading coefficients in y3.
inline SmoothnessCertificate smoothness_certificate(const FPoly& p, std::uint64_t seed = 20240607) {
  if (p.is_zero() || !p.is_homogeneous()) throw std::invalid_argument("smoothness_certificate: need a nonzero form");
  SmoothnessCertificate cert;
  const int d = p.degree();
  const FieldPtr& f = p.zero_coefficient().field();
  if (d <= 1) {
    cert.smooth = true;
    cert.detail = "linear";
    return cert;
  }
  std::size_t coprime = 0;
  std::optional<BinaryForm<FieldElement>> last_gcd;
  FPoly last_p(p.zero_coefficient());
  Matrix3 last_m = Matrix3::identity(f);
  for (std::size_t attempt = 0; attempt < 5 && coprime < 2; ++attempt) {
    std::mt19937_64 rng(seed + attempt);
    const Matrix3 m = random_change(f, rng);
    ++cert.attempts;
    const FPoly q = linear_substitution(p, m);
    const FPoly q1 = q.derivative(0), q2 = q.derivative(1), q3 = q.derivative(2);
    const unsigned du = static_cast<unsigned>(d), dd = du - 1;
    if (q.coefficient({0, 0, du}).is_zero() || q1.coefficient({0, 0, dd}).is_zero() ||
        q2.coefficient({0, 0, dd}).is_zero())
      continue;
    if (resultant_eliminate(q, q3, 2).is_zero()) throw NotSquarefree("smoothness_certificate: input is not squarefree");
    const FPoly r12 = resultant_eliminate(q1, q2, 2), r13 = resultant_eliminate(q1, q3, 2);
    if (r12.is_zero() || r13.is_zero()) continue;
    const auto b12 = BinaryForm<FieldElement>::from_poly(r12, static_cast<unsigned>(r12.degree()), 0, 1);
    const auto b13 = BinaryForm<FieldElement>::from_poly(r13, static_cast<unsigned>(r13.degree()), 0, 1);
    const auto g = binary_form_gcd(b12, b13);
    cert.changes.push_back(m);
    if (g.degree() == 0) {
      ++coprime;
      continue;
    }
    last_gcd = g;
    last_p = q;
    last_m = m;
  }
  if (coprime >= 2) {
    cert.smooth = true;
    cert.detail = "eliminants coprime in 2 independent changes";
    return cert;
  }
  if (!last_gcd) {
    cert.detail = "no generic coordinate change found";
    return cert;
  }
  // witness: a rational root (x0 : y0) of the squarefree part of the gcd, then
  // a common root in y3 of the three partials
  const auto& g = *last_gcd;
  std::vector<std::pair<FieldElement, FieldElement>> roots;
  if (g.y_order() > 0) roots.emplace_back(FieldElement(f, 1L), FieldElement(f));
  std::vector<FieldElement> dense = g.coeffs();
  detail::trim_dense(dense);
  if (dense.size() >= 2) {
    const auto common = detail::dense_gcd(dense, detail::dense_derivative(dense));
    const auto sqf = common.size() > 1 ? detail::dense_quotient(dense, common) : dense;
    if (sqf.size() == 2) roots.emplace_back(-sqf[0] / sqf[1], FieldElement(f, 1L));
  }
  const FPoly q1 = last_p.derivative(0), q2 = last_p.derivative(1), q3 = last_p.derivative(2);
  for (const auto& [x0, y0] : roots) {
    auto h = detail::dense_gcd(detail::restrict_to(q1, x0, y0), detail::restrict_to(q2, x0, y0));
    h = detail::dense_gcd(h, detail::restrict_to(q3, x0, y0));
    if (h.size() != 2) continue;
    const FieldElement z0 = -h[0] / h[1];
    const ProjPoint w(last_m.apply({x0, y0, z0}));
    bool ok = true;
    for (std::size_t i = 0; i < 3 && ok; ++i) ok = p.derivative(i).evaluate(w.coords(), FieldElement(f)).is_zero();
    if (ok) {
      cert.witness = w;
      cert.detail = "singular point found";
      return cert;
    }
  }
  cert.detail = "unresolved: eliminant gcd of degree " + std::to_string(g.degree());
  return cert;
}

// ---- genus arithmetic ----

struct GenusBoundInput {
  long d = 0;  // curve degree
  long r = 0;  // orbit length
  long m = 0;  // multiplicity
};

struct GenusBoundResult {
  bool impossible = false;
  long value = 0;  // (9 - r) m (m - 1)
};

/// A degree-d curve with an orbit of r points of multiplicity m, d <= 3m,
/// forces -2 <= 2g - 2 <= (9 - r) m (m - 1).
inline GenusBoundResult genus_orbit_inequality(const GenusBoundInput& in) {
  if (in.d <= 0 || in.r <= 0 || in.m <= 0) throw std::invalid_argument("genus_orbit_inequality: inputs must be positive");
  if (in.m < 2) throw std::invalid_argument("genus_orbit_inequality: requires m >= 2");
  if (in.d > 3 * in.m) throw std::invalid_argument("genus_orbit_inequality: requires d <= 3m");
  GenusBoundResult r;
  r.value = (9 - in.r) * in.m * (in.m - 1);
  r.impossible = r.value < -2;
  return r;
}

struct GenusAudit {
  long arithmetic_genus = 0;
  long budget = 0;
  bool contradiction = false;
};

/// (d-1)(d-2)/2 minus r m(m-1)/2 for each (orbit length r, multiplicity m).
inline GenusAudit arithmetic_genus_audit(long d, const std::vector<std::pair<long, long>>& deductions) {
  if (d < 1) throw std::invalid_argument("arithmetic_genus_audit: degree must be positive");
  GenusAudit a;
  a.arithmetic_genus = (d - 1) * (d - 2) / 2;
  a.budget = a.arithmetic_genus;
  for (const auto& [r, m] : deductions) a.budget -= r * m * (m - 1) / 2;
  a.contradiction = a.budget < 0;
  return a;
}

// ---- JSON ----

inline json to_json(const BinaryForm<ParamPoly>& b) {
  json c = json::array();
  for (const auto& x : b.coeffs()) c.push_back(to_json(x));
  return json{{"degree", b.degree()}, {"coeffs", c}};
}

inline json to_json(const LocalData& d) {
  return json{{"point", to_json(d.point)},
              {"multiplicity", d.multiplicity},
              {"tangent_cone", to_json(d.tangent_cone)},
              {"double_point_type", d.double_point_type ? json(to_string(*d.double_point_type)) : json(nullptr)},
              {"assumptions", d.assumptions.list()},
              {"coordinate_change", to_json(d.change)}};
}

}  // namespace kleincert
