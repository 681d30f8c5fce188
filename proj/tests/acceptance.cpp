// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "kleincert/exceptionality.hpp"

#include <chrono>
#include <iostream>

using namespace kleincert;

namespace {

int failures = 0;

void criterion(int n, const std::string& name, const std::function<std::string()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string problem;
  try {
    problem = fn();
  } catch (const std::exception& e) {
    problem = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1fs", s);
  if (problem.empty()) {
    std::cout << "PASS " << n << ": " << name << " (" << secs << ")" << std::endl;
  } else {
    ++failures;
    std::cout << "FAIL " << n << ": " << name << " (" << secs << "): " << problem << std::endl;
  }
}

const MatrixGroup& j168() {
  static const MatrixGroup g = build_group(fixture_j168()).descended();
  return g;
}
const MatrixGroup& j504() {
  static const MatrixGroup g = build_group(fixture_j504()).descended();
  return g;
}
const KleinInvariants& inv() {
  static const KleinInvariants k = build_invariants();
  return k;
}
const SpecialOrbits& special() {
  static const SpecialOrbits s = special_orbits(j168());
  return s;
}

CaseOptions cached(std::uint64_t seed = 20240607) {
  CaseOptions o;
  o.seed = seed;
  o.invariants = inv();
  return o;
}

PPoly param(std::size_t i) { return PPoly::constant(param_var(i, field_make(1))); }
PPoly pf() { return curve_from(inv().f); }
PPoly pd() { return curve_from(inv().delta); }
PPoly pencil12() { return param(0) * pf().pow(3) + param(1) * pd().pow(2); }
PPoly pencil14() { return param(0) * pf().pow(2) * pd() + param(1) * curve_from(inv().c); }

ProjPoint point(const MatrixGroup& g, std::array<std::pair<unsigned, unsigned>, 3> roots, bool zero_tail = false) {
  Vec3 v;
  for (std::size_t i = 0; i < 3; ++i)
    v[i] = zero_tail && i > 0 ? FieldElement(g.field()) : root_of_unity(g.field(), roots[i].first, roots[i].second);
  return ProjPoint(v);
}

bool failed_somewhere(const std::vector<Obligation>& obs) {
  for (const auto& o : obs)
    if (o.kind == ObligationKind::computed && o.status != ObligationStatus::verified) return true;
  return false;
}

}  // namespace

int main() {
  criterion(1, "group orders, generator orders, determinants", [] {
    if (j168().order() != 168) return std::string("|J168| = ") + std::to_string(j168().order());
    if (j504().order() != 504) return std::string("|J504| = ") + std::to_string(j504().order());
    const std::vector<std::size_t> want168{7, 3, 2}, want504{7, 3, 2, 3};
    for (const auto* g : {&j168(), &j504()}) {
      std::vector<std::size_t> ord;
      for (std::size_t s = 0; s < g->generators().size(); ++s) ord.push_back(generator_order_in(*g, s));
      if (ord != (g->order() == 168 ? want168 : want504)) return std::string("generator orders differ");
      for (const auto& m : g->elements())
        if (!m.det().is_one()) return std::string("determinant != 1");
    }
    return std::string();
  });

  criterion(2, "invariant degrees, invariance, J504 characters", [] {
    const auto& g = j504();
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& p = inv()[i];
      if (!p.is_homogeneous() || p.degree() != static_cast<int>(kInvariantDegrees[i]))
        return std::string("degree of ") + kInvariantNames[i];
      const auto s168 = semiinvariant_scalars(lift(p, j168().field()), j168());
      if (!s168) return std::string(kInvariantNames[i]) + " not invariant under J168";
      for (const auto& c : *s168)
        if (!c.is_one()) return std::string(kInvariantNames[i]) + " moved by a J168 generator";
      const auto s504 = semiinvariant_scalars(lift(p, g.field()), g);
      if (!s504) return std::string(kInvariantNames[i]) + " not a J504 semiinvariant";
      // the scalar zeta_3 I multiplies a form of degree d by zeta_3^d
      if ((*s504)[3] != root_of_unity(g.field(), 3, kInvariantDegrees[i] % 3))
        return std::string("character of ") + kInvariantNames[i];
    }
    const auto chi = character_of(inv().f, g);
    if (!chi || chi->trivial()) return std::string("f should have a nontrivial J504 character");
    return std::string();
  });

  criterion(3, "syzygy residual is zero at degree 42", [] {
    const auto r = verify_syzygy(inv());
    if (!r.zero) return "residual of degree " + std::to_string(r.residual_degree);
    if (!r.homogeneous || r.rhs_terms != 9) return std::string("right-hand side malformed");
    return std::string();
  });

  criterion(4, "semiinvariant dimensions and Molien = Reynolds rank", [] {
    for (const auto* g : {&j168(), &j504()})
      for (const auto& chi : linear_characters(*g)) {
        SemiinvariantEngine eng(*g, chi);
        for (unsigned d = 1; d <= 3; ++d)
          if (!eng.basis(d).empty()) return "semiinvariant of degree " + std::to_string(d);
      }
    const std::map<unsigned, std::size_t> want{{1, 0}, {2, 0}, {3, 0}, {4, 1}, {6, 1}, {12, 2}, {14, 2}, {18, 3}};
    SemiinvariantEngine eng(j168(), trivial_character(j168()));
    const auto mol = molien_series(j168(), trivial_character(j168()), 18);
    for (unsigned d = 1; d <= 18; ++d) {
      const auto sp = semiinvariant_space(eng, d, mol[d]);
      if (!sp.consistent()) return "Molien != rank at degree " + std::to_string(d);
      auto it = want.find(d);
      if (it != want.end() && sp.basis.size() != it->second) return "dimension at degree " + std::to_string(d);
    }
    return std::string();
  });

  criterion(5, "psi_min families for J168 and the J504 sublist", [] {
    using M = std::array<unsigned, 4>;
    const std::set<std::set<M>> j168_list{{M{1, 0, 0, 0}},
                                           {M{0, 1, 0, 0}},
                                           {M{2, 0, 0, 0}},
                                           {M{1, 1, 0, 0}},
                                           {M{3, 0, 0, 0}, M{0, 2, 0, 0}},
                                           {M{2, 1, 0, 0}, M{0, 0, 1, 0}},
                                           {M{4, 0, 0, 0}, M{1, 2, 0, 0}},
                                           {M{0, 3, 0, 0}, M{3, 1, 0, 0}, M{1, 0, 1, 0}}};
    const std::set<std::set<M>> j504_list{{M{0, 1, 0, 0}},
                                           {M{3, 0, 0, 0}, M{0, 2, 0, 0}},
                                           {M{0, 3, 0, 0}, M{3, 1, 0, 0}, M{1, 0, 1, 0}}};
    for (const auto& [id, want] : {std::pair{"j168", j168_list}, std::pair{"j504", j504_list}}) {
      CaseAnalysis a(fixture_by_id(id), klein_claims(id), cached());
      std::set<std::set<M>> got;
      for (const auto& fam : a.psi_families()) got.insert(std::set<M>(fam.monomials.begin(), fam.monomials.end()));
      if (got != want) return std::string("family list differs for ") + id;
      if (a.psi_min_fact().status != ObligationStatus::verified) return std::string("families do not span for ") + id;
    }
    return std::string();
  });

  criterion(6, "special orbits, stabilizers, representatives, dual minimum", [] {
    const auto& s = special();
    std::map<std::size_t, std::size_t> count;
    for (const auto& o : s.orbits) ++count[o.length()];
    std::vector<std::size_t> lengths;
    for (const auto& [l, n] : count) {
      lengths.push_back(l);
      if (l < 84 && n != 1) return "two orbits of length " + std::to_string(l);
    }
    if (lengths != std::vector<std::size_t>{21, 24, 28, 42, 56, 84}) return std::string("lengths differ");
    if (s.find_length(21)->stabilizer_order != 8) return std::string("stabilizer of the 21-orbit");
    const MatrixGroup ge = j168().embedded(eigen_conductor(j168()));
    const Orbit o24 = orbit_of(point(ge, {{{1, 0}, {1, 0}, {1, 0}}}, true), ge);
    const Orbit o56 = orbit_of(point(ge, {{{1, 0}, {3, 2}, {3, 1}}}), ge);
    if (o24.length() != 24 || o24.stabilizer_order != 7) return std::string("(1:0:0) does not give the 24-orbit");
    if (o56.length() != 56 || o56.stabilizer_order != 3) return std::string("(1:z3^2:z3) does not give the 56-orbit");
    if (min_orbit_length_dual(j168()) != 21) return std::string("dual minimum");
    return std::string();
  });

  criterion(7, "curve facts: smoothness, nodes, cusps, local indices, Bezout, genus budgets", [] {
    const auto q = field_make(1);
    if (!smoothness_certificate(lift(inv().f, q)).smooth) return std::string("C1 not certified smooth");
    if (!smoothness_certificate(lift(inv().delta, q)).smooth) return std::string("C2 not certified smooth");
    const auto& o24 = *special().find_length(24);
    const PPoly fd = curve_from(inv().f * inv().delta);
    Assumptions cusp_as;
    for (const auto& x : o24.points) {
      const ProjPoint p = x.descended(x.minimal_conductor());
      const auto node = analyze_point(fd, p);
      if (node.double_point_type != DoublePoint::node) return std::string("f Delta: not a node");
      const auto cusp = analyze_point(pencil12(), p);
      if (cusp.double_point_type != DoublePoint::cusp) return std::string("pencil: not a cusp");
      cusp_as.merge(cusp.assumptions);
      if (intersection_multiplicity(pf(), pencil12(), p).value != 2) return std::string("I(f, pencil) != 2");
      if (intersection_multiplicity(pd(), pencil12(), p).value != 3) return std::string("I(Delta, pencil) != 3");
    }
    if (!cusp_as.contains("lambda != 0") || !cusp_as.contains("mu != 0"))
      return "cusp assumptions " + std::to_string(cusp_as.list().size());
    const Orbit& o56 = *special().find_length(56);
    const std::vector<std::tuple<PPoly, PPoly, const Orbit*, long>> audits{
        {pf(), pd(), &o24, 24}, {pf(), pencil12(), &o24, 48}, {pd(), pencil12(), &o24, 72}, {pf(), pencil14(), &o56, 56}};
    for (const auto& [a, b, o, total] : audits) {
      const auto r = bezout_audit(a, b, {o});
      if (!r.consistent || r.total != total) return "Bezout total " + std::to_string(r.total);
    }
    if (arithmetic_genus_audit(12, {{24, 2}}).budget != 31) return std::string("genus budget 55 - 24");
    if (arithmetic_genus_audit(14, {{56, 2}, {21, 2}}).budget != 1) return std::string("genus budget 78 - 56 - 21");
    return std::string();
  });

  criterion(8, "orbit-genus inequality: r = 21 impossible for m = 2..6, r = 10, m = 2 gives -2", [] {
    for (long m = 2; m <= 6; ++m) {
      const auto r = genus_orbit_inequality({3 * m, 21, m});
      // oracle: (9 - 21) m (m - 1) = -12 m (m - 1)
      if (!r.impossible || r.value != -12 * m * (m - 1)) return "m = " + std::to_string(m);
    }
    const auto edge = genus_orbit_inequality({6, 10, 2});
    if (edge.value != -2 || edge.impossible) return std::string("boundary case");
    return std::string();
  });

  std::optional<Certificate> c168;
  criterion(9, "end to end: both J groups verified, diagonal cyclic fails, 5 faults flip the verdict", [&] {
    c168 = run_case_analysis(fixture_j168(), cached());
    if (!c168->verified()) return "J168: " + c168->verdict();
    const auto c504 = run_case_analysis(fixture_j504(), cached());
    if (!c504.verified()) return "J504: " + c504.verdict();
    const GroupFixture diag = [] {
      const auto f = field_make(7);
      GroupFixture fx;
      fx.id = "diagonal_cyclic";
      fx.conductor = 7;
      fx.generator_names = {"g1"};
      fx.generators = {Matrix3::diagonal(root_of_unity(f, 7, 1), root_of_unity(f, 7, 2), root_of_unity(f, 7, 4))};
      fx.expected_order = 7;
      return fx;
    }();
    const auto cd = run_case_analysis(diag, klein_claims("j168"), cached());
    bool degree_one = false;
    for (const auto& o : cd.obligations)
      if (o.id == "invariants.no_low_degree_semiinvariant")
        degree_one = o.status == ObligationStatus::failed && o.witness.value("min_degree", 0) == 1;
    if (cd.verified() || !degree_one) return std::string("diagonal cyclic group not rejected by a degree-1 semiinvariant");
    // each fault is read by one section; a failure there is a failure of the certificate
    auto fault = [](const GroupFixture& fx, const KleinClaims& claims, Section s, bool use_cache) {
      CaseAnalysis a(fx, claims, use_cache ? cached() : CaseOptions{});
      return failed_somewhere(a.run(s));
    };
    auto syz = klein_claims("j168");
    syz.syzygy_rhs.add_term({0, 7, 0, 0}, Rational(1));
    auto tau = fixture_j168();
    const auto f = tau.generators[0].field();
    tau.generators[0] = Matrix3::diagonal(root_of_unity(f, 7, 1), root_of_unity(f, 7, 2), root_of_unity(f, 7, 3));
    auto r24 = klein_claims("j168");
    r24.rep24.coords = {{{1, 1, 0}, {1, 1, 0}, {0, 1, 0}}};
    auto r56 = klein_claims("j168");
    r56.rep56.coords = {{{1, 1, 0}, {1, 1, 0}, {1, 1, 0}}};
    auto kn = klein_claims("j168");
    kn.normalization.k = rational(1, 13);
    const std::vector<std::pair<std::string, bool>> faults{
        {"syzygy 1728 -> 1729", fault(fixture_j168(), syz, Section::syzygy, true)},
        {"tau entry", fault(tau, klein_claims("j168"), Section::group, true)},
        {"24-orbit representative", fault(fixture_j168(), r24, Section::orbits, true)},
        {"56-orbit representative", fault(fixture_j168(), r56, Section::orbits, true)},
        {"K normalization 1/13", fault(fixture_j168(), kn, Section::syzygy, false)}};
    for (const auto& [name, flipped] : faults)
      if (!flipped) return "fault not detected: " + name;
    return std::string();
  });

  criterion(10, "determinism: same seed byte-identical, other seed same statuses", [&] {
    if (!c168) c168 = run_case_analysis(fixture_j168(), cached());
    const std::string a = to_json(*c168).dump();
    const std::string b = to_json(run_case_analysis(fixture_j168(), cached())).dump();
    if (a != b) return std::string("same seed, different bytes");
    const auto other = run_case_analysis(fixture_j168(), cached(424242));
    if (other.verdict() != c168->verdict() || other.obligations.size() != c168->obligations.size())
      return std::string("verdict depends on the seed");
    for (std::size_t i = 0; i < other.obligations.size(); ++i)
      if (other.obligations[i].id != c168->obligations[i].id || other.obligations[i].status != c168->obligations[i].status)
        return "status of " + other.obligations[i].id + " depends on the seed";
    return std::string();
  });

  return failures == 0 ? 0 : 1;
}
