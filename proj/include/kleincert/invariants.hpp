#pragma once

// Klein's invariants f, Delta, C, K, the degree-42 syzygy, linear characters,
// Molien series and semiinvariant spaces of a finite matrix group.
//
// Action convention: (p o g)(y) = p(g y). This is a right action,
// p o (gh) = (p o g) o h, and p is a semiinvariant with character chi when
// p o g = chi(g) p for all g.

#include "kleincert/linalg.hpp"
#include "kleincert/matrix_group.hpp"
#include "kleincert/parallel.hpp"
#include "kleincert/poly_ops.hpp"
#include "kleincert/serialize.hpp"

#include <deque>
#include <map>
#include <set>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace kleincert {

// ---- the four invariants ----

inline QPoly qvar(std::size_t i) { return QPoly::variable(i, Rational(0)); }
inline QPoly qconst(const Rational& r) { return QPoly::constant(r); }

inline QPoly klein_f() { return qvar(0).pow(3) * qvar(2) + qvar(1).pow(3) * qvar(0) + qvar(2).pow(3) * qvar(1); }

inline PolyMatrix<QPoly> hessian_matrix(const QPoly& p) {
  PolyMatrix<QPoly> h(3, std::vector<QPoly>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) h[i][j] = p.derivative(i).derivative(j);
  return h;
}

inline QPoly hessian(const QPoly& p) { return poly_matrix_det(hessian_matrix(p), qconst(0)); }

/// Scalars applied to Hess(f), the bordered determinant and the Jacobian.
struct InvariantNormalization {
  Rational delta = rational(1, 54);
  Rational c = rational(1, 9);
  Rational k = rational(1, 14);
};

struct KleinInvariants {
  QPoly f, delta, c, k;
  const QPoly& operator[](std::size_t i) const {
    switch (i) {
      case 0: return f;
      case 1: return delta;
      case 2: return c;
      default: return k;
    }
  }
};

inline constexpr std::array<unsigned, 4> kInvariantDegrees{4, 6, 14, 21};
inline constexpr std::array<const char*, 4> kInvariantNames{"f", "Delta", "C", "K"};

inline QPoly build_delta(const QPoly& f, const Rational& scale = rational(1, 54)) { return hessian(f).scaled(scale); }

/// scale * det [[f_ij, Delta_i], [Delta_j, 0]].
inline QPoly build_C(const QPoly& f, const QPoly& delta, const Rational& scale = rational(1, 9)) {
  PolyMatrix<QPoly> m(4, std::vector<QPoly>(4, qconst(0)));
  const auto h = hessian_matrix(f);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m[i][j] = h[i][j];
    m[i][3] = delta.derivative(i);
    m[3][i] = delta.derivative(i);
  }
  return poly_matrix_det(m, qconst(0)).scaled(scale);
}

/// scale * Jacobian determinant of (f, Delta, C); columns are the gradients.
inline QPoly build_K(const QPoly& f, const QPoly& delta, const QPoly& c, const Rational& scale = rational(1, 14)) {
  PolyMatrix<QPoly> m(3, std::vector<QPoly>(3));
  for (std::size_t i = 0; i < 3; ++i) {
    m[i][0] = f.derivative(i);
    m[i][1] = delta.derivative(i);
    m[i][2] = c.derivative(i);
  }
  return poly_matrix_det(m, qconst(0)).scaled(scale);
}

inline KleinInvariants build_invariants(const InvariantNormalization& n = {}) {
  KleinInvariants inv;
  inv.f = klein_f();
  inv.delta = build_delta(inv.f, n.delta);
  inv.c = build_C(inv.f, inv.delta, n.c);
  inv.k = build_K(inv.f, inv.delta, inv.c, n.k);
  return inv;
}

inline json invariants_to_json(const KleinInvariants& inv) {
  return json{{"f", to_json(inv.f)}, {"Delta", to_json(inv.delta)}, {"C", to_json(inv.c)}, {"K", to_json(inv.k)}};
}
inline KleinInvariants invariants_from_json(const json& j) {
  const Rational z(0);
  return {poly_from_json<QPoly>(j.at("f"), z), poly_from_json<QPoly>(j.at("Delta"), z),
          poly_from_json<QPoly>(j.at("C"), z), poly_from_json<QPoly>(j.at("K"), z)};
}

// ---- the syzygy ----

/// Right-hand side of K^2 = C^3 + 1728 D^7 + ... as a polynomial in the
/// generator alphabet, exponents ordered (f, Delta, C, K).
inline GeneratorPoly klein_syzygy_rhs() {
  GeneratorPoly g(Rational(0));
  g.add_term({0, 0, 3, 0}, Rational(1));
  g.add_term({0, 7, 0, 0}, Rational(1728));
  g.add_term({1, 4, 1, 0}, Rational(1008));
  g.add_term({2, 1, 2, 0}, Rational(-88));
  g.add_term({3, 5, 0, 0}, Rational(-60032));
  g.add_term({4, 2, 1, 0}, Rational(1088));
  g.add_term({6, 3, 0, 0}, Rational(22016));
  g.add_term({7, 0, 1, 0}, Rational(-256));
  g.add_term({9, 1, 0, 0}, Rational(-2048));
  return g;
}

/// Substitutes the invariants for the generator symbols, reusing powers.
inline QPoly evaluate_generator_poly(const GeneratorPoly& g, const KleinInvariants& inv) {
  std::array<std::vector<QPoly>, 4> pw;
  for (std::size_t i = 0; i < 4; ++i) pw[i].push_back(qconst(1));
  auto power = [&](std::size_t i, unsigned k) -> const QPoly& {
    while (pw[i].size() <= k) pw[i].push_back(pw[i].back() * inv[i]);
    return pw[i][k];
  };
  QPoly out(Rational(0));
  for (const auto& [e, c] : g.terms()) {
    QPoly t = qconst(c);
    for (std::size_t i = 0; i < 4; ++i)
      if (e[i]) t *= power(i, e[i]);
    out += t;
  }
  return out;
}

struct SyzygyResult {
  bool zero = false;
  QPoly residual;  // K^2 - rhs
  std::size_t rhs_terms = 0;
  int residual_degree = -1;
  bool homogeneous = false;  // both sides homogeneous of degree 42
};

inline SyzygyResult verify_syzygy(const KleinInvariants& inv, const GeneratorPoly& rhs = klein_syzygy_rhs()) {
  SyzygyResult r;
  const QPoly lhs = inv.k * inv.k;
  const QPoly right = evaluate_generator_poly(rhs, inv);
  r.residual = lhs - right;
  r.zero = r.residual.is_zero();
  r.rhs_terms = rhs.size();
  r.residual_degree = r.residual.degree();
  r.homogeneous = lhs.is_homogeneous() && right.is_homogeneous() && lhs.degree() == 42 &&
                  (right.is_zero() || right.degree() == 42);
  return r;
}

// ---- characters ----

/// A linear character as exponents mod `modulus`: chi(gen_s) = zeta_modulus^exps[s].
struct Character {
  unsigned modulus = 1;
  std::vector<unsigned> exps;
  bool trivial() const {
    for (auto e : exps)
      if (e % modulus) return false;
    return true;
  }
  std::string describe(const std::vector<std::string>& names) const {
    if (trivial()) return "trivial";
    std::string s;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (!s.empty()) s += ", ";
      const unsigned g = std::gcd(exps[i], modulus);
      const unsigned ord = modulus / g;
      s += names.at(i) + " -> zeta_" + std::to_string(ord) + "^" + std::to_string(exps[i] / g);
    }
    return s;
  }
};

inline std::size_t generator_order_in(const MatrixGroup& g, std::size_t s) {
  return g.element_order(*g.find(g.generators()[s]));
}

/// Exponent of chi on every element (element index -> exponent mod M).
inline std::vector<unsigned> character_table(const MatrixGroup& g, const Character& chi) {
  std::vector<unsigned> v(g.order(), 0);
  for (std::size_t i = 1; i < g.order(); ++i) {
    unsigned acc = 0;
    for (auto s : g.word(i)) acc = (acc + chi.exps[s]) % chi.modulus;
    v[i] = acc;
  }
  return v;
}

inline bool character_consistent(const MatrixGroup& g, const Character& chi) {
  const auto v = character_table(g, chi);
  for (std::size_t i = 0; i < g.order(); ++i)
    for (std::size_t s = 0; s < g.generators().size(); ++s)
      if (v[g.right_mul(i, s)] != (v[i] + chi.exps[s]) % chi.modulus) return false;
  return true;
}

/// Every linear character, found by trying all generator values of the right
/// orders against the multiplication table.
inline std::vector<Character> linear_characters(const MatrixGroup& g) {
  const std::size_t ng = g.generators().size();
  std::vector<unsigned> ord(ng);
  unsigned m = 1;
  for (std::size_t s = 0; s < ng; ++s) {
    ord[s] = static_cast<unsigned>(generator_order_in(g, s));
    m = std::lcm(m, ord[s]);
  }
  std::size_t combos = 1;
  for (auto o : ord) combos *= o;
  if (combos > 200000) throw std::runtime_error("linear_characters: too many candidate assignments");
  std::vector<Character> out;
  std::vector<unsigned> idx(ng, 0);
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t r = c;
    Character chi{m, std::vector<unsigned>(ng)};
    for (std::size_t s = 0; s < ng; ++s) {
      chi.exps[s] = static_cast<unsigned>(r % ord[s]) * (m / ord[s]);
      r /= ord[s];
    }
    if (character_consistent(g, chi)) out.push_back(std::move(chi));
  }
  return out;
}

inline Character trivial_character(const MatrixGroup& g) { return {1, std::vector<unsigned>(g.generators().size(), 0)}; }

/// Smallest conductor that holds both the group and zeta_modulus.
inline unsigned conductor_for(const MatrixGroup& g, unsigned modulus) {
  const unsigned n = g.field()->conductor();
  if (n % modulus == 0 || (n % 2 == 1 && (2 * n) % modulus == 0)) return n;
  unsigned m = std::lcm(n, modulus);
  if (m % 2 == 0 && (m / 2) % 2 == 1 && (m / 2) % n == 0) m /= 2;
  return m;
}

/// Values chi(gen_s) in the given field.
inline std::vector<FieldElement> character_values(const Character& chi, const FieldPtr& f) {
  std::vector<FieldElement> out;
  for (auto e : chi.exps) out.push_back(root_of_unity(f, chi.modulus, e));
  return out;
}

/// The scalar c with p o gamma = c p for each generator gamma, or nullopt.
inline std::optional<std::vector<FieldElement>> semiinvariant_scalars(const FPoly& p, const MatrixGroup& g) {
  if (p.is_zero()) throw std::invalid_argument("character_of: zero polynomial");
  std::vector<FieldElement> out;
  const auto& [e, lead] = p.leading();
  for (const auto& gen : g.generators()) {
    const FPoly img = linear_substitution(p, gen);
    const FieldElement c = img.coefficient(e) / lead;
    if (img != p.scaled(c)) return std::nullopt;
    out.push_back(c);
  }
  return out;
}

/// The character of p as an exponent vector, or nullopt when p is not a
/// semiinvariant (or its scalars are not roots of unity of the group's orders).
inline std::optional<Character> character_of(const QPoly& p, const MatrixGroup& g) {
  const FPoly lp = lift(p, g.field());
  const auto scal = semiinvariant_scalars(lp, g);
  if (!scal) return std::nullopt;
  for (const auto& chi : linear_characters(g)) {
    const unsigned n = conductor_for(g, chi.modulus);
    const auto f = field_make(n);
    const auto vals = character_values(chi, f);
    bool match = true;
    for (std::size_t s = 0; s < vals.size() && match; ++s) match = embed((*scal)[s], f) == vals[s];
    if (match) return chi;
  }
  return std::nullopt;
}

// ---- Molien series ----

/// Coefficients t^0 .. t^dmax of (1/|G|) sum_g chi(g)^-1 / det(1 - t g).
inline std::vector<Rational> molien_series(const MatrixGroup& g, const Character& chi, unsigned dmax,
                                           const ExecutionContext& ctx = ExecutionContext()) {
  const FieldPtr f = field_make(conductor_for(g, chi.modulus));
  const auto table = character_table(g, chi);
  std::vector<std::vector<FieldElement>> per(g.order());
  ctx.parallel_for(g.order(), [&](std::size_t i) {
    const Matrix3 m = embed(g.element(i), f);
    const FieldElement e1 = m.trace(), e2 = m.principal_minor_sum(), e3 = m.det();
    const FieldElement w = root_of_unity(f, chi.modulus, static_cast<long>((chi.modulus - table[i]) % chi.modulus));
    std::vector<FieldElement> s(dmax + 1, FieldElement(f));
    s[0] = FieldElement(f, 1L);
    for (unsigned k = 1; k <= dmax; ++k) {
      FieldElement v = e1 * s[k - 1];
      if (k >= 2) v -= e2 * s[k - 2];
      if (k >= 3) v += e3 * s[k - 3];
      s[k] = std::move(v);
    }
    for (auto& x : s) x = x * w;
    per[i] = std::move(s);
  });
  std::vector<Rational> out;
  for (unsigned k = 0; k <= dmax; ++k) {
    FieldElement acc(f);
    for (std::size_t i = 0; i < g.order(); ++i) acc += per[i][k];
    acc = acc * Rational(1, static_cast<unsigned long>(g.order()));
    if (!acc.is_rational()) throw std::logic_error("molien_series: non-rational coefficient");
    out.push_back(acc.rational_value());
  }
  return out;
}

// ---- semiinvariant spaces ----

inline std::vector<Exponent<3>> monomials_of_degree(unsigned d) {
  std::vector<Exponent<3>> out;
  for (unsigned a = d + 1; a-- > 0;)
    for (unsigned b = d - a + 1; b-- > 0;) out.push_back({a, b, d - a - b});
  return out;
}

/// Twisted Reynolds operator R(p) = (1/|G|) sum_g chi(g)^-1 p o g, evaluated
/// through a subgroup H generated by the monomial generators:
///   R(p) = (1/[G:H]) sum_c chi(c)^-1 (P_H p) o c
/// over right coset representatives c, with P_H the Reynolds operator of H.
/// P_H is cheap (monomials map to monomials) and the coset images are built
/// along a spanning tree that uses as few dense generators as possible.
class SemiinvariantEngine {
 public:
  SemiinvariantEngine(const MatrixGroup& g, const Character& chi) : g_(g.embedded(conductor_for(g, chi.modulus))), chi_(chi) {
    f_ = g_.field();
    table_ = character_table(g_, chi_);
    std::vector<std::size_t> hgens;
    for (std::size_t s = 0; s < g_.generators().size(); ++s)
      if (g_.generators()[s].is_monomial()) hgens.push_back(*g_.find(g_.generators()[s]));
    h_ = generated_subgroup(g_, hgens);
    build_cosets();
    for (const auto& m : g_.generators()) subs_.emplace_back(m);
    for (auto h : h_) hsubs_.emplace_back(g_.element(h));
  }

  const MatrixGroup& group() const noexcept { return g_; }
  const FieldPtr& field() const noexcept { return f_; }
  std::size_t subgroup_order() const noexcept { return h_.size(); }
  std::size_t index() const noexcept { return coset_rep_.size(); }
  /// Number of dense (non-monomial) substitutions per polynomial.
  std::size_t dense_steps() const {
    std::size_t k = 0;
    for (std::size_t c = 1; c < coset_rep_.size(); ++c) k += g_.generators()[coset_gen_[c]].is_monomial() ? 0 : 1;
    return k;
  }

  /// P_H of a monomial.
  FPoly subgroup_average(const Exponent<3>& e) {
    FPoly acc{FieldElement(f_)};
    for (std::size_t k = 0; k < h_.size(); ++k) {
      const FieldElement w = chi_inverse(h_[k]);
      for (const auto& [u, c] : hsubs_[k].image(e).terms()) acc.add_term(u, c * w);
    }
    return acc.scaled(Rational(1, static_cast<unsigned long>(h_.size())));
  }

  FPoly reynolds(const FPoly& p) {
    std::vector<FPoly> img(coset_rep_.size());
    img[0] = p;
    FPoly acc = p.scaled(chi_inverse(coset_rep_[0]));
    for (std::size_t c = 1; c < coset_rep_.size(); ++c) {
      img[c] = subs_[coset_gen_[c]].apply(img[coset_parent_[c]]);
      acc += img[c].scaled(chi_inverse(coset_rep_[c]));
    }
    return acc.scaled(Rational(1, static_cast<unsigned long>(coset_rep_.size())));
  }

  /// Reduced-echelon basis of the degree-d semiinvariants with this character.
  std::vector<FPoly> basis(unsigned d) {
    const auto mons = monomials_of_degree(d);
    std::map<Exponent<3>, std::size_t, GrlexLess<3>> col;
    for (std::size_t i = 0; i < mons.size(); ++i) col[mons[i]] = i;
    // span of P_H over all monomials; H permutes monomials up to scalars so one
    // representative per H-orbit suffices, but the full sweep is cheap
    DenseMatrix<FieldElement> rows;
    std::set<Exponent<3>> seen;
    for (const auto& e : mons) {
      if (seen.count(e)) continue;
      const FPoly a = subgroup_average(e);
      for (auto& sub : hsubs_) seen.insert(sub.image(e).terms().begin()->first);
      if (!a.is_zero()) rows.push_back(to_row(a, col, mons.size()));
    }
    const auto hb = row_reduce(rows);
    DenseMatrix<FieldElement> images;
    for (const auto& r : hb.rows) {
      const FPoly q = reynolds(from_row(r, mons));
      if (!q.is_zero()) images.push_back(to_row(q, col, mons.size()));
    }
    std::vector<FPoly> out;
    for (const auto& r : row_reduce(images).rows) out.push_back(from_row(r, mons));
    return out;
  }

 private:
  FieldElement chi_inverse(std::size_t i) const {
    return root_of_unity(f_, chi_.modulus, static_cast<long>((chi_.modulus - table_[i]) % chi_.modulus));
  }

  std::vector<FieldElement> to_row(const FPoly& p, const std::map<Exponent<3>, std::size_t, GrlexLess<3>>& col,
                                   std::size_t n) const {
    std::vector<FieldElement> r(n, FieldElement(f_));
    for (const auto& [e, c] : p.terms()) r[col.at(e)] = c;
    return r;
  }
  FPoly from_row(const std::vector<FieldElement>& r, const std::vector<Exponent<3>>& mons) const {
    FPoly p{FieldElement(f_)};
    for (std::size_t i = 0; i < mons.size(); ++i) p.add_term(mons[i], r[i]);
    return p;
  }

  // Right cosets Hx, labelled by scanning; representatives chosen by a 0-1
  // BFS where monomial generators cost nothing.
  void build_cosets() {
    const std::size_t n = g_.order();
    std::vector<std::size_t> label(n, MatrixGroup::npos);
    std::size_t count = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (label[x] != MatrixGroup::npos) continue;
      for (auto h : h_) label[g_.multiply(h, x)] = count;
      ++count;
    }
    std::vector<std::size_t> dist(count, MatrixGroup::npos);
    coset_rep_.assign(count, MatrixGroup::npos);
    std::vector<std::size_t> parent(count, MatrixGroup::npos), gen(count, MatrixGroup::npos);
    std::deque<std::size_t> dq{label[0]};
    dist[label[0]] = 0;
    coset_rep_[label[0]] = 0;
    std::vector<std::size_t> order;
    std::vector<char> done(count, 0);
    while (!dq.empty()) {
      const std::size_t c = dq.front();
      dq.pop_front();
      if (done[c]) continue;
      done[c] = 1;
      order.push_back(c);
      for (std::size_t s = 0; s < g_.generators().size(); ++s) {
        const std::size_t w = g_.generators()[s].is_monomial() ? 0 : 1;
        const std::size_t y = g_.right_mul(coset_rep_[c], s);
        const std::size_t cy = label[y];
        if (done[cy] || dist[cy] <= dist[c] + w) continue;
        dist[cy] = dist[c] + w;
        coset_rep_[cy] = y;
        parent[cy] = c;
        gen[cy] = s;
        if (w == 0)
          dq.push_front(cy);
        else
          dq.push_back(cy);
      }
    }
    // renumber in processing order so parents precede children
    std::vector<std::size_t> pos(count);
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::vector<std::size_t> rep(count), par(count, MatrixGroup::npos), gg(count, MatrixGroup::npos);
    for (std::size_t c = 0; c < count; ++c) {
      rep[pos[c]] = coset_rep_[c];
      if (parent[c] != MatrixGroup::npos) {
        par[pos[c]] = pos[parent[c]];
        gg[pos[c]] = gen[c];
      }
    }
    coset_rep_ = std::move(rep);
    coset_parent_ = std::move(par);
    coset_gen_ = std::move(gg);
  }

  MatrixGroup g_;
  Character chi_;
  FieldPtr f_;
  std::vector<unsigned> table_;
  std::vector<std::size_t> h_;
  std::vector<std::size_t> coset_rep_, coset_parent_, coset_gen_;
  std::vector<LinearSubstitution> subs_, hsubs_;
};

struct SemiinvariantSpace {
  unsigned degree = 0;
  std::vector<FPoly> basis;
  Rational molien;  // expected dimension
  bool consistent() const { return Rational(static_cast<unsigned long>(basis.size())) == molien; }
};

inline SemiinvariantSpace semiinvariant_space(SemiinvariantEngine& eng, unsigned d, const Rational& molien_coeff) {
  return {d, eng.basis(d), molien_coeff};
}

inline SemiinvariantSpace semiinvariant_space(const MatrixGroup& g, unsigned d, const Character& chi) {
  SemiinvariantEngine eng(g, chi);
  return {d, eng.basis(d), molien_series(g, chi, d)[d]};
}

// ---- psi_min families ----

struct PsiFamily {
  unsigned degree = 0;
  std::vector<std::array<unsigned, 4>> monomials;  // exponents of (f, Delta, C, K)
  std::string description;
};

inline std::string monomial_name(const std::array<unsigned, 4>& e) {
  static const char* sym[4] = {"f", "D", "C", "K"};
  std::string s;
  for (std::size_t i = 0; i < 4; ++i) {
    if (e[i] == 0) continue;
    s += sym[i];
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

/// Every product f^i D^j C^k K^l (l <= 1) of weighted degree d <= dmax,
/// grouped by degree; `keep` filters degrees (e.g. divisibility by 3).
template <class Keep>
std::vector<PsiFamily> enumerate_psi_min(unsigned dmax, Keep keep) {
  static const char* params[] = {"lambda", "mu", "nu", "rho", "sigma"};
  std::vector<PsiFamily> out;
  for (unsigned d = 1; d <= dmax; ++d) {
    if (!keep(d)) continue;
    PsiFamily fam;
    fam.degree = d;
    for (unsigned l = 0; l <= 1; ++l)
      for (unsigned k = 0; 14 * k + 21 * l <= d; ++k)
        for (unsigned j = 0; 14 * k + 21 * l + 6 * j <= d; ++j) {
          const unsigned rest = d - 14 * k - 21 * l - 6 * j;
          if (rest % 4 == 0) fam.monomials.push_back({rest / 4, j, k, l});
        }
    if (fam.monomials.empty()) continue;
    std::sort(fam.monomials.begin(), fam.monomials.end(), std::greater<>());
    if (fam.monomials.size() == 1) {
      fam.description = monomial_name(fam.monomials[0]);
    } else {
      for (std::size_t i = 0; i < fam.monomials.size(); ++i) {
        if (i) fam.description += " + ";
        fam.description += std::string(params[i % 5]) + " " + monomial_name(fam.monomials[i]);
      }
    }
    out.push_back(std::move(fam));
  }
  return out;
}

inline std::vector<PsiFamily> enumerate_psi_min(unsigned dmax) {
  return enumerate_psi_min(dmax, [](unsigned) { return true; });
}

inline QPoly family_member(const std::array<unsigned, 4>& e, const KleinInvariants& inv) {
  GeneratorPoly g(Rational(0));
  g.add_term({e[0], e[1], e[2], e[3]}, Rational(1));
  return evaluate_generator_poly(g, inv);
}

/// The family's monomials are independent and span the given space.
inline bool family_spans(const PsiFamily& fam, const KleinInvariants& inv, const std::vector<FPoly>& space,
                         const FieldPtr& f) {
  const auto mons = monomials_of_degree(fam.degree);
  std::map<Exponent<3>, std::size_t, GrlexLess<3>> col;
  for (std::size_t i = 0; i < mons.size(); ++i) col[mons[i]] = i;
  auto row = [&](const FPoly& p) {
    std::vector<FieldElement> r(mons.size(), FieldElement(f));
    for (const auto& [e, c] : p.terms()) r[col.at(e)] = embed(c, f);
    return r;
  };
  DenseMatrix<FieldElement> fam_rows, all;
  for (const auto& m : fam.monomials) fam_rows.push_back(row(lift(family_member(m, inv), f)));
  all = fam_rows;
  for (const auto& p : space) all.push_back(row(p));
  const std::size_t rf = rank_of(fam_rows);
  return rf == fam.monomials.size() && rf == space.size() && rank_of(all) == rf;
}

// ---- K and the mirror lines ----

struct FixedLinesResult {
  std::vector<FPoly> forms;  // one linear form per involution
  FPoly product;
  std::optional<FieldElement> scalar;  // product = scalar * K
  bool each_divides = false;
};

/// Linear forms of the -1 eigenplanes of the involutions of PG: for an
/// involution g (g^2 = I, eigenvalues 1, -1, -1) every nonzero row a of g + I
/// satisfies a . y = 0 on ker(g + I).
inline FixedLinesResult product_of_fixed_lines(const MatrixGroup& g, const QPoly& k) {
  FixedLinesResult r;
  const FieldPtr& f = g.field();
  std::vector<char> used(g.collineation_order(), 0);
  for (std::size_t i = 0; i < g.order(); ++i) {
    const Matrix3& m = g.element(i);
    if (m.is_identity() || !(m * m).is_identity()) continue;
    const std::size_t c = g.projective_class(i);
    if (used[c]) continue;
    used[c] = 1;
    const Matrix3 s = m + Matrix3::identity(f);
    std::size_t row = 0;
    while (row < 3 && is_zero_vector(s.row(row))) ++row;
    FPoly l{FieldElement(f)};
    for (std::size_t j = 0; j < 3; ++j) {
      Exponent<3> e{};
      e[j] = 1;
      l.add_term(e, s(row, j));
    }
    r.forms.push_back(std::move(l));
  }
  r.product = FPoly::constant(FieldElement(f, 1L));
  for (const auto& l : r.forms) r.product *= l;
  const FPoly kk = lift(k, f);
  if (!kk.is_zero() && !r.product.is_zero()) {
    const auto& [e, lead] = kk.leading();
    const FieldElement c = r.product.coefficient(e) / lead;
    if (!c.is_zero() && r.product == kk.scaled(c)) r.scalar = c;
  }
  r.each_divides = !r.forms.empty();
  for (const auto& l : r.forms) r.each_divides = r.each_divides && divide_exact(kk, l).has_value();
  return r;
}

}  // namespace kleincert
