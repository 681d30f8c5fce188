#include "kleincert/exceptionality.hpp"

#include <gtest/gtest.h>

using namespace kleincert;

namespace {

const KleinInvariants& inv() {
  static const KleinInvariants k = build_invariants();
  return k;
}

CaseOptions cached(std::uint64_t seed = 20240607) {
  CaseOptions o;
  o.seed = seed;
  o.invariants = inv();
  return o;
}

const Certificate& cert168() {
  static const Certificate c = run_case_analysis(fixture_j168(), cached());
  return c;
}
const Certificate& cert504() {
  static const Certificate c = run_case_analysis(fixture_j504(), cached());
  return c;
}

const Obligation* find(const Certificate& c, const std::string& id) {
  for (const auto& o : c.obligations)
    if (o.id == id) return &o;
  return nullptr;
}

GroupFixture diagonal_cyclic() {
  const auto f = field_make(7);
  GroupFixture fx;
  fx.id = "diagonal_cyclic";
  fx.conductor = 7;
  fx.generator_names = {"g1"};
  fx.generators = {Matrix3::diagonal(root_of_unity(f, 7, 1), root_of_unity(f, 7, 2), root_of_unity(f, 7, 4))};
  fx.expected_order = 7;
  return fx;
}

bool has_failure(const std::vector<Obligation>& obs) {
  for (const auto& o : obs)
    if (o.kind == ObligationKind::computed && o.status != ObligationStatus::verified) return true;
  return false;
}

}  // namespace

TEST(DegreeBound, Examples) {
  EXPECT_EQ(degree_bound({1, 2, 3, 4, 6}), 18u);
  EXPECT_EQ(degree_bound({1}), 3u);
  EXPECT_EQ(degree_bound({2, 3}), 9u);
  const auto o = degree_bound_obligation({1, 2, 3, 4, 6});
  EXPECT_EQ(o.status, ObligationStatus::verified);
  EXPECT_EQ(o.witness["bound"], 18);
  // oracle: the largest d with 2n - d >= -n
  for (const auto& row : o.witness["per_n"]) EXPECT_EQ(row["max_d"].get<unsigned>(), 3 * row["n"].get<unsigned>());
}

TEST(Obligations, KindAndStatus) {
  const auto c = cited("x", "s", {"r", "q"});
  EXPECT_EQ(c.status, ObligationStatus::assumed);
  const auto thrown = computed("y", "s", {"r", "q"}, []() -> Check { throw std::runtime_error("boom"); });
  EXPECT_EQ(thrown.status, ObligationStatus::failed);
  EXPECT_EQ(thrown.witness["error"], "boom");
  const auto ok = computed("z", "s", {"r", "q"}, [] { return Check{true, {}, {}}; });
  EXPECT_EQ(ok.status, ObligationStatus::verified);
  Certificate cert{"g", {}, {c, ok}};
  EXPECT_TRUE(cert.verified());
  cert.obligations.push_back(thrown);
  EXPECT_EQ(cert.verdict(), "failure(y)");
}

TEST(CaseAssignment, EveryFamilyHasACase) {
  const auto fams = enumerate_psi_min(18);
  std::map<unsigned, std::vector<std::string>> got;
  for (const auto& fam : fams) {
    got[fam.degree] = case_assignment(fam);
    EXPECT_FALSE(got[fam.degree].empty()) << fam.description;
  }
  using V = std::vector<std::string>;
  EXPECT_EQ(got[4], V{"Case 1"});
  EXPECT_EQ(got[8], V{"Case 1"});
  EXPECT_EQ(got[10], V{"Case 2"});
  EXPECT_EQ(got[12], V{"Case 3"});
  EXPECT_EQ(got[14], (V{"Case 3", "Case 4A"}));
  EXPECT_EQ(got[16], (V{"Case 3", "Case 4A", "Case 4B"}));
  EXPECT_EQ(got[18], (V{"Case 3", "Case 4A", "Case 4B", "Case 4C"}));
}

TEST(CaseAnalysis, J168Verified) {
  const auto& c = cert168();
  EXPECT_TRUE(c.verified()) << c.verdict() << "\n" << render_text(c);
  EXPECT_EQ(c.verdict(), "all_computed_verified");
  std::size_t computed_n = 0, cited_n = 0;
  for (const auto& o : c.obligations) {
    EXPECT_FALSE(o.anchor.quote.empty()) << o.id;
    EXPECT_FALSE(o.anchor.ref.empty()) << o.id;
    if (o.kind == ObligationKind::cited) {
      EXPECT_EQ(o.status, ObligationStatus::assumed) << o.id;
      ++cited_n;
    } else {
      EXPECT_NE(o.status, ObligationStatus::assumed) << o.id;
      ++computed_n;
    }
  }
  EXPECT_GE(computed_n, 30u);
  EXPECT_GE(cited_n, 10u);
  // section order: group, invariants, orbits, curves, arithmetic, cited
  const std::vector<std::string> prefixes{"group.", "invariants.", "orbits.", "curves.", "arith.", "cite."};
  std::size_t at = 0;
  for (const auto& o : c.obligations) {
    while (at < prefixes.size() && o.id.rfind(prefixes[at], 0) != 0 && o.id.rfind("cases.", 0) != 0 &&
           o.id != "arith.degree_bound")
      ++at;
    EXPECT_LT(at, prefixes.size()) << o.id;
  }
  ASSERT_NE(find(c, "orbits.min_length"), nullptr);
  EXPECT_EQ(find(c, "orbits.min_length")->witness["dual"], 21);
}

TEST(CaseAnalysis, J168Witnesses) {
  const auto& c = cert168();
  const auto* bez = find(c, "curves.bezout_f_pencil12");
  ASSERT_NE(bez, nullptr);
  EXPECT_EQ(bez->witness["total"], 48);
  const auto* cusp = find(c, "curves.cusps_pencil12");
  ASSERT_NE(cusp, nullptr);
  const std::set<std::string> as(cusp->assumptions.begin(), cusp->assumptions.end());
  EXPECT_TRUE(as.count("lambda != 0"));
  EXPECT_TRUE(as.count("mu != 0"));
  const auto* g12 = find(c, "curves.genus_budget_12");
  EXPECT_EQ(g12->witness["budget"], 31);
  const auto* cov = find(c, "cases.coverage");
  EXPECT_EQ(cov->witness["assignment"].size(), 8u);
  const auto* psi = find(c, "invariants.psi_min");
  EXPECT_EQ(psi->witness["families"].size(), 8u);
}

TEST(CaseAnalysis, J504VerifiedWithFilter) {
  const auto& c = cert504();
  EXPECT_TRUE(c.verified()) << c.verdict();
  const auto* psi = find(c, "invariants.psi_min");
  ASSERT_NE(psi, nullptr);
  EXPECT_EQ(psi->witness["kept_degrees"], (std::vector<unsigned>{6, 12, 18}));
  const auto* chars = find(c, "invariants.invariance");
  EXPECT_NE(chars->witness["characters"]["f"].get<std::string>(), "trivial");
  EXPECT_EQ(chars->witness["characters"]["Delta"].get<std::string>(), "trivial");
}

TEST(CaseAnalysis, DiagonalCyclicFails) {
  const auto c = run_case_analysis(diagonal_cyclic(), klein_claims("j168"), cached());
  EXPECT_FALSE(c.verified());
  const auto* o = find(c, "invariants.no_low_degree_semiinvariant");
  ASSERT_NE(o, nullptr);
  EXPECT_EQ(o->status, ObligationStatus::failed);
  ASSERT_FALSE(o->witness["found"].empty());
  EXPECT_EQ(o->witness["min_degree"], 1);
  EXPECT_EQ(o->witness["found"][0]["degree"], 1);
  EXPECT_NE(c.verdict().find("invariants.no_low_degree_semiinvariant"), std::string::npos);
}

// A fault only needs to show up in the section that reads it: the baseline
// certificate is verified, so any failing obligation flips the verdict.
TEST(FaultInjection, FiveCorruptionsFlipTheVerdict) {
  {
    auto claims = klein_claims("j168");
    claims.syzygy_rhs.add_term({0, 7, 0, 0}, Rational(1));  // 1728 -> 1729
    CaseAnalysis a(fixture_j168(), claims, cached());
    EXPECT_TRUE(has_failure(a.run(Section::syzygy)));
  }
  {
    auto fx = fixture_j168();
    const auto f = fx.generators[0].field();
    fx.generators[0] = Matrix3::diagonal(root_of_unity(f, 7, 1), root_of_unity(f, 7, 2), root_of_unity(f, 7, 3));
    CaseAnalysis a(fx, klein_claims("j168"), cached());
    const auto obs = a.run(Section::group);
    EXPECT_TRUE(has_failure(obs));
    EXPECT_EQ(run_case_analysis(fx, cached()).verified(), false);
  }
  {
    auto claims = klein_claims("j168");
    claims.rep24.coords = {{{1, 1, 0}, {1, 1, 0}, {0, 1, 0}}};
    CaseAnalysis a(fixture_j168(), claims, cached());
    EXPECT_TRUE(has_failure(a.run(Section::orbits)));
  }
  {
    auto claims = klein_claims("j168");
    claims.rep56.coords = {{{1, 1, 0}, {1, 1, 0}, {1, 1, 0}}};
    CaseAnalysis a(fixture_j168(), claims, cached());
    EXPECT_TRUE(has_failure(a.run(Section::orbits)));
  }
  {
    auto claims = klein_claims("j168");
    claims.normalization.k = rational(1, 13);
    CaseAnalysis a(fixture_j168(), claims);
    EXPECT_TRUE(has_failure(a.run(Section::syzygy)));
  }
}

TEST(Determinism, SameSeedSameBytesOtherSeedSameStatuses) {
  const auto a = to_json(CaseAnalysis(fixture_j168(), klein_claims("j168"), cached(7)).certificate({Section::curves}));
  const auto b = to_json(CaseAnalysis(fixture_j168(), klein_claims("j168"), cached(7)).certificate({Section::curves}));
  EXPECT_EQ(a.dump(), b.dump());
  const auto c = to_json(CaseAnalysis(fixture_j168(), klein_claims("j168"), cached(99)).certificate({Section::curves}));
  EXPECT_NE(a.dump(), c.dump());
  ASSERT_EQ(a["obligations"].size(), c["obligations"].size());
  for (std::size_t i = 0; i < a["obligations"].size(); ++i) {
    EXPECT_EQ(a["obligations"][i]["id"], c["obligations"][i]["id"]);
    EXPECT_EQ(a["obligations"][i]["status"], c["obligations"][i]["status"]);
  }
  EXPECT_EQ(a["verdict"], c["verdict"]);
}

TEST(Remark, Checks) {
  const auto g = build_group(fixture_j168()).descended();
  const auto obs = remark_checks(inv(), g);
  ASSERT_EQ(obs.size(), 5u);
  EXPECT_EQ(obs[0].status, ObligationStatus::verified);
  EXPECT_EQ(obs[0].witness["weighted_degrees"], std::vector<unsigned>{42});
  EXPECT_EQ(obs[1].witness["lines"], 21);
  for (std::size_t i = 2; i < obs.size(); ++i) {
    EXPECT_EQ(obs[i].kind, ObligationKind::cited);
    EXPECT_EQ(obs[i].status, ObligationStatus::assumed);
  }
}

TEST(CertificateJson, Schema) {
  const json j = to_json(cert168());
  EXPECT_EQ(j["group"], "j168");
  EXPECT_EQ(j["verdict"], "all_computed_verified");
  for (const auto& o : j["obligations"])
    for (const char* k : {"id", "kind", "status", "statement", "anchor", "assumptions", "witness"})
      EXPECT_TRUE(o.contains(k)) << k;
  EXPECT_NE(render_text(cert168()).find("verdict: all_computed_verified"), std::string::npos);
}
