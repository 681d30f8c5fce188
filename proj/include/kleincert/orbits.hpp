#pragma once

// Fixed loci of collineations, the special orbits of a finite subgroup of
// PGL(3) and their stabilizers.

#include "kleincert/invariants.hpp"
#include "kleincert/matrix_group.hpp"
#include "kleincert/parallel.hpp"
#include "kleincert/poly_ops.hpp"
#include "kleincert/serialize.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kleincert {

/// A point of P^2 with the first nonzero coordinate scaled to 1.
class ProjPoint {
 public:
  explicit ProjPoint(Vec3 v) : c_(std::move(v)) {
    std::size_t i = 0;
    while (i < 3 && c_[i].is_zero()) ++i;
    if (i == 3) throw std::invalid_argument("ProjPoint: zero vector");
    if (!c_[i].is_one()) {
      const FieldElement s = c_[i].inverse();
      for (auto& x : c_) x = x * s;
    }
  }
  const Vec3& coords() const noexcept { return c_; }
  const FieldElement& operator[](std::size_t i) const { return c_[i]; }
  const FieldPtr& field() const { return c_[0].field(); }
  std::string key() const { return c_[0].key() + "|" + c_[1].key() + "|" + c_[2].key(); }
  bool operator==(const ProjPoint& o) const { return c_ == o.c_; }
  std::size_t support() const {
    return static_cast<std::size_t>(!c_[0].is_zero()) + !c_[1].is_zero() + !c_[2].is_zero();
  }
  ProjPoint image(const Matrix3& m) const { return ProjPoint(m.apply(c_)); }
  /// Smallest cyclotomic field holding the canonical coordinates.
  unsigned minimal_conductor() const { return kleincert::minimal_conductor(std::span<const FieldElement>(c_)); }
  ProjPoint descended(unsigned d) const {
    SubfieldDescent desc(field(), field_make(d));
    Vec3 v{FieldElement(desc.target()), FieldElement(desc.target()), FieldElement(desc.target())};
    for (std::size_t i = 0; i < 3; ++i) {
      auto x = desc(c_[i]);
      if (!x) throw FieldMismatch("ProjPoint: coordinates outside Q(zeta_" + std::to_string(d) + ")");
      v[i] = std::move(*x);
    }
    return ProjPoint(std::move(v));
  }
  ProjPoint embedded(const FieldPtr& f) const { return ProjPoint({embed(c_[0], f), embed(c_[1], f), embed(c_[2], f)}); }

 private:
  Vec3 c_;
};

/// Simpler points first (fewer nonzero coordinates), then by key.
struct ProjPointLess {
  bool operator()(const ProjPoint& a, const ProjPoint& b) const {
    if (a.support() != b.support()) return a.support() < b.support();
    return a.key() < b.key();
  }
};

inline bool fixes(const Matrix3& m, const Vec3& v) { return is_zero_vector(cross(m.apply(v), v)); }

inline json to_json(const ProjPoint& p) { return json::array({to_json(p[0]), to_json(p[1]), to_json(p[2])}); }

// ---- fixed loci ----

class EigenvalueNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FixedLocus {
  bool whole_plane = false;  // scalar matrix
  std::vector<ProjPoint> points;
  std::vector<Vec3> lines;  // linear forms a, line {a . y = 0}
  std::vector<FieldElement> eigenvalues;
};

/// Eigenvalues are found among the roots of unity of the field; each
/// eigenspace gives an isolated point (dim 1) or a fixed line (dim 2).
inline FixedLocus fixed_locus(const Matrix3& m) {
  FixedLocus out;
  if (m.is_scalar()) {
    out.whole_plane = true;
    return out;
  }
  const FieldPtr& f = m.field();
  const auto cp = m.char_poly();
  const unsigned n = roots_of_unity_order(f);
  std::size_t found = 0;
  for (unsigned k = 0; k < n && found < 3; ++k) {
    const FieldElement z = root_of_unity(f, n, k);
    if (!(((cp[3] * z + cp[2]) * z + cp[1]) * z + cp[0]).is_zero()) continue;
    out.eigenvalues.push_back(z);
    const auto ker = matrix_kernel(m - Matrix3::scalar(z));
    found += ker.size();
    if (ker.size() == 1)
      out.points.emplace_back(ker[0]);
    else if (ker.size() == 2)
      out.lines.push_back(cross(ker[0], ker[1]));
  }
  // a defective eigenvalue contributes less than its multiplicity; recount
  std::size_t mult = 0;
  for (const auto& z : out.eigenvalues) {
    // multiplicity of z as a root of the characteristic polynomial
    std::array<FieldElement, 4> q = cp;
    std::size_t deg = 3;
    while (deg > 0) {
      FieldElement r = q[deg];
      std::array<FieldElement, 4> nq{FieldElement(f), FieldElement(f), FieldElement(f), FieldElement(f)};
      for (std::size_t i = deg; i-- > 0;) {
        nq[i] = r;
        r = q[i] + r * z;
      }
      if (!r.is_zero()) break;
      q = nq;
      --deg;
      ++mult;
    }
  }
  if (mult != 3) throw EigenvalueNotFound("fixed_locus: eigenvalues outside the field's roots of unity");
  return out;
}

/// Conductor holding the eigenvalues of every element: the group's conductor
/// together with all element orders.
inline unsigned eigen_conductor(const MatrixGroup& g) {
  unsigned n = g.field()->conductor();
  for (std::size_t i = 0; i < g.order(); ++i) n = std::lcm(n, static_cast<unsigned>(g.element_order(i)));
  if (n % 4 == 2) n /= 2;
  return n;
}

// ---- orbits ----

struct Orbit {
  std::vector<ProjPoint> points;  // sorted by ProjPointLess
  std::size_t stabilizer_order = 0;
  ProjPoint representative;
  bool generic_on_fixed_line = false;
  std::size_t length() const { return points.size(); }
};

inline std::size_t stabilizer_count(const ProjPoint& p, const MatrixGroup& g) {
  std::size_t s = 0;
  for (std::size_t c : g.projective_representatives()) s += fixes(g.element(c), p.coords()) ? 1 : 0;
  return s;
}

/// All images of p, by breadth-first search over the generators.
inline Orbit orbit_of(const ProjPoint& p, const MatrixGroup& g) {
  std::map<std::string, ProjPoint> seen;
  std::vector<ProjPoint> queue{p};
  seen.emplace(p.key(), p);
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (const auto& m : g.generators()) {
      ProjPoint q = queue[head].image(m);
      auto key = q.key();
      if (seen.emplace(key, q).second) queue.push_back(std::move(q));
    }
  std::sort(queue.begin(), queue.end(), ProjPointLess());
  if (g.collineation_order() % queue.size() != 0) throw std::logic_error("orbit_of: length does not divide |PG|");
  Orbit o{queue, g.collineation_order() / queue.size(), queue.front()};
  return o;
}

struct SpecialOrbits {
  std::vector<Orbit> orbits;  // sorted by length
  std::size_t candidate_count = 0;
  std::size_t fixed_line_count = 0;
  std::size_t isolated_fixed_point_incidences = 0;  // sum over g != 1 of isolated fixed points
  std::size_t fix_incidences = 0;                   // sum over g != 1 of |Fix(g) cap S|
  std::size_t weighted_stabilizers = 0;             // sum over orbits of length * (stab - 1)
  bool stabilizers_verified = false;                // direct count equals |PG| / length
  bool union_stable = false;
  bool completeness = false;  // every nontrivial stabilizer contains an element of order 2, 3, 4 or 7
  std::vector<std::size_t> lengths() const {
    std::vector<std::size_t> v;
    for (const auto& o : orbits) v.push_back(o.length());
    return v;
  }
  std::size_t min_length() const {
    std::size_t m = 0;
    for (const auto& o : orbits)
      if (m == 0 || o.length() < m) m = o.length();
    return m;
  }
  const Orbit* find_length(std::size_t len) const {
    for (const auto& o : orbits)
      if (o.length() == len && !o.generic_on_fixed_line) return &o;
    return nullptr;
  }
};

/// Candidates: isolated fixed points of nonidentity collineations and
/// pairwise intersections of fixed lines. Every point with a nontrivial
/// stabilizer is fixed by an element of prime order or order 4; an isolated
/// fixed point of that element is a candidate and a point on its fixed line
/// either meets another fixed line or has stabilizer of order 2, in which
/// case its orbit is generic. One such generic orbit per fixed-line class is
/// added as a representative of that infinite family.
inline SpecialOrbits special_orbits(const MatrixGroup& g0, const ExecutionContext& ctx = ExecutionContext()) {
  const MatrixGroup g = g0.embedded(eigen_conductor(g0));
  SpecialOrbits out;
  const auto& reps = g.projective_representatives();
  std::vector<FixedLocus> loci(reps.size());
  ctx.parallel_for(reps.size(), [&](std::size_t i) { loci[i] = fixed_locus(g.element(reps[i])); });

  std::map<std::string, ProjPoint> cand;
  std::vector<Vec3> lines;
  std::set<std::string> line_keys;
  for (const auto& l : loci) {
    for (const auto& p : l.points) cand.emplace(p.key(), p);
    for (const auto& a : l.lines) {
      const ProjPoint canon(a);
      if (line_keys.insert(canon.key()).second) lines.push_back(canon.coords());
    }
  }
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      ProjPoint p(cross(lines[i], lines[j]));
      cand.emplace(p.key(), p);
    }
  out.candidate_count = cand.size();
  out.fixed_line_count = lines.size();

  std::set<std::string> covered;
  for (const auto& [k, p] : cand) {
    if (covered.count(k)) continue;
    Orbit o = orbit_of(p, g);
    for (const auto& q : o.points) covered.insert(q.key());
    out.orbits.push_back(std::move(o));
  }
  // generic points on fixed lines: one orbit per G-class of lines
  std::set<std::string> line_done;
  std::vector<Matrix3> dual_generators;
  for (const auto& m : g.generators()) dual_generators.push_back(m.inverse().transpose());
  for (const auto& a : lines) {
    if (line_done.count(ProjPoint(a).key())) continue;
    // lines move by a -> a g^-1, i.e. by the dual action; close under generators
    std::vector<Vec3> queue{a};
    line_done.insert(ProjPoint(a).key());
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (const auto& t : dual_generators) {
        Vec3 b = ProjPoint(t.apply(queue[head])).coords();
        if (line_done.insert(ProjPoint(b).key()).second) queue.push_back(std::move(b));
      }
    // two points spanning the line
    const auto ker = matrix_kernel(Matrix3({a[0], a[1], a[2], FieldElement(g.field()), FieldElement(g.field()),
                                            FieldElement(g.field()), FieldElement(g.field()), FieldElement(g.field()),
                                            FieldElement(g.field())}));
    for (long t = 1; t < 200; ++t) {
      Vec3 v = ker[0];
      for (std::size_t i = 0; i < 3; ++i) v[i] += ker[1][i] * t;
      ProjPoint p(v);
      if (covered.count(p.key())) continue;
      if (stabilizer_count(p, g) != 2) continue;
      Orbit o = orbit_of(p, g);
      o.representative = p;
      o.generic_on_fixed_line = true;
      for (const auto& q : o.points) covered.insert(q.key());
      out.orbits.push_back(std::move(o));
      break;
    }
  }
  std::stable_sort(out.orbits.begin(), out.orbits.end(),
                   [](const Orbit& a, const Orbit& b) { return a.length() < b.length(); });
  for (auto& o : out.orbits)
    if (!o.generic_on_fixed_line) o.representative = o.points.front();

  // stabilizers by direct count
  std::vector<std::size_t> direct(out.orbits.size());
  ctx.parallel_for(out.orbits.size(),
                   [&](std::size_t i) { direct[i] = stabilizer_count(out.orbits[i].representative, g); });
  out.stabilizers_verified = true;
  for (std::size_t i = 0; i < out.orbits.size(); ++i) {
    const auto& o = out.orbits[i];
    out.stabilizers_verified = out.stabilizers_verified && direct[i] == o.stabilizer_order &&
                               o.length() * o.stabilizer_order == g.collineation_order();
    out.weighted_stabilizers += o.length() * (o.stabilizer_order - 1);
  }
  // incidences (g, x) with g != 1 fixing x in S
  std::vector<ProjPoint> all;
  for (const auto& o : out.orbits) all.insert(all.end(), o.points.begin(), o.points.end());
  // counted from the fixed loci, independently of the orbit computation
  std::map<std::string, std::size_t> where;
  for (std::size_t k = 0; k < all.size(); ++k) where.emplace(all[k].key(), k);
  std::vector<std::size_t> inc(reps.size(), 0);
  ctx.parallel_for(reps.size(), [&](std::size_t i) {
    const auto& l = loci[i];
    if (l.whole_plane) return;
    for (const auto& p : l.points) inc[i] += where.count(p.key());
    for (const auto& a : l.lines)
      for (const auto& x : all) inc[i] += dot(a, x.coords()).is_zero() ? 1 : 0;
  });
  for (std::size_t i = 0; i < reps.size(); ++i) {
    out.fix_incidences += inc[i];
    out.isolated_fixed_point_incidences += loci[i].points.size();
  }
  // G-stability of the union
  std::set<std::string> keys;
  for (const auto& x : all) keys.insert(x.key());
  out.union_stable = keys.size() == all.size();
  for (const auto& m : g.generators())
    for (const auto& x : all) out.union_stable = out.union_stable && keys.count(x.image(m).key());
  // completeness: each stabilizer contains an element of order 2, 3, 4 or 7
  // (more generally, of prime or prime-power order), whose fixed points were
  // all enumerated
  out.completeness = true;
  for (const auto& o : out.orbits) {
    bool has = false;
    for (std::size_t c : reps) {
      const std::size_t ord = g.collineation_element_order(c);
      if (ord == 1 || !fixes(g.element(c), o.representative.coords())) continue;
      std::size_t q = ord, p = 2;
      while (q % p) ++p;
      while (q % p == 0) q /= p;
      if (q == 1) {
        has = true;
        break;
      }
    }
    out.completeness = out.completeness && has;
  }
  return out;
}

inline std::size_t min_orbit_length_dual(const MatrixGroup& g, const ExecutionContext& ctx = ExecutionContext()) {
  if (g.collineation_order() == 1) return 1;
  return special_orbits(dual_representation(g), ctx).min_length();
}

inline std::size_t min_orbit_length(const MatrixGroup& g, const ExecutionContext& ctx = ExecutionContext()) {
  if (g.collineation_order() == 1) return 1;
  return special_orbits(g, ctx).min_length();
}

enum class CurveIncidence { contained, disjoint, partial };

inline const char* to_string(CurveIncidence c) {
  switch (c) {
    case CurveIncidence::contained: return "contained";
    case CurveIncidence::disjoint: return "disjoint";
    default: return "partial";
  }
}

/// Evaluates p on every orbit point. A partial answer for a semiinvariant p
/// of the orbit's group is impossible and raises logic_error.
inline CurveIncidence orbit_on_curve(const Orbit& o, const FPoly& p, const MatrixGroup* g = nullptr) {
  if (!p.is_zero() && !p.is_homogeneous()) throw std::invalid_argument("orbit_on_curve: p not homogeneous");
  std::size_t zeros = 0;
  for (const auto& x : o.points) {
    const FPoly q = lift(p, x.field());
    zeros += q.evaluate(x.coords(), FieldElement(x.field())).is_zero() ? 1 : 0;
  }
  if (zeros == o.points.size()) return CurveIncidence::contained;
  if (zeros == 0) return CurveIncidence::disjoint;
  if (g && semiinvariant_scalars(lift(p, g->field()), *g)) {
    throw std::logic_error("orbit_on_curve: semiinvariant vanishes on part of an orbit");
  }
  return CurveIncidence::partial;
}

inline json to_json(const Orbit& o) {
  return json{{"length", o.length()},
              {"stabilizer", o.stabilizer_order},
              {"representative", to_json(o.representative)},
              {"generic_on_fixed_line", o.generic_on_fixed_line}};
}

}  // namespace kleincert
