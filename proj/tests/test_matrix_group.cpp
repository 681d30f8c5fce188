#include "kleincert/matrix_group.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace kleincert;

namespace {

const MatrixGroup& j168() {
  static const MatrixGroup g = build_group(fixture_j168());
  return g;
}
const MatrixGroup& j504() {
  static const MatrixGroup g = build_group(fixture_j504());
  return g;
}

// Oracle: class sizes in PG by conjugating with every element of G.
std::multiset<std::size_t> brute_force_class_sizes(const MatrixGroup& g) {
  std::map<std::string, int> seen;
  std::multiset<std::size_t> sizes;
  std::vector<Matrix3> inv;
  for (const auto& m : g.elements()) inv.push_back(m.inverse());
  for (std::size_t c : g.projective_representatives()) {
    const auto key = projective_key(g.element(c));
    if (seen.count(key)) continue;
    std::set<std::string> cls;
    for (std::size_t k = 0; k < g.order(); ++k) cls.insert(projective_key(inv[k] * g.element(c) * g.element(k)));
    for (const auto& s : cls) seen[s] = 1;
    sizes.insert(cls.size());
  }
  return sizes;
}

}  // namespace

TEST(Fixtures, OmegaDerivationValidated) {
  for (unsigned n : {7u, 84u}) {
    const auto v = validate_omega(field_make(n));
    EXPECT_LT(v.max_float_error, 1e-12) << n;
    EXPECT_TRUE(v.involution);
    EXPECT_TRUE(v.symmetric);
    EXPECT_TRUE(v.det_one);
  }
}

TEST(Fixtures, Orders) {
  EXPECT_EQ(j168().order(), 168u);
  EXPECT_EQ(j504().order(), 504u);
  for (const auto& m : j504().elements()) EXPECT_TRUE(m.det().is_one());
  const auto fx = fixture_j168();
  EXPECT_EQ(matrix_order(fx.generators[0], 100).value(), 7u);
  EXPECT_EQ(matrix_order(fx.generators[1], 100).value(), 3u);
  EXPECT_EQ(matrix_order(fx.generators[2], 100).value(), 2u);
  EXPECT_THROW(fixture_j504(14), std::invalid_argument);
}

TEST(Closure, SmallCases) {
  const auto f = field_make(7);
  EXPECT_EQ(MatrixGroup::closure({Matrix3::identity(f)}).order(), 1u);
  const auto tau = fixture_j168(7).generators[0];
  EXPECT_EQ(MatrixGroup::closure({tau}).order(), 7u);
  EXPECT_THROW(MatrixGroup::closure({Matrix3::scalar(FieldElement(f, 2L))}, 50), ClosureBoundExceeded);
  EXPECT_THROW(MatrixGroup::closure(fixture_j168(7).generators, 100), ClosureBoundExceeded);
}

TEST(Closure, Idempotent) {
  const auto g = j168().descended();
  const auto again = MatrixGroup::closure(g.elements());
  EXPECT_EQ(element_key_set(again), element_key_set(g));
}

TEST(Closure, TablesConsistent) {
  const auto g = j168().descended();
  EXPECT_EQ(g.field()->conductor(), 7u);
  for (std::size_t i = 0; i < g.order(); i += 7)
    for (std::size_t j = 0; j < g.order(); j += 5)
      EXPECT_EQ(g.element(g.multiply(i, j)), g.element(i) * g.element(j));
  for (std::size_t i = 0; i < g.order(); ++i) EXPECT_EQ(g.multiply(i, g.inverse(i)), g.identity_index());
}

TEST(Closure, DescentPreservesIndexing) {
  const auto& big = j504();
  const auto small = big.descended();
  EXPECT_EQ(small.field()->conductor(), 21u);
  const auto f84 = big.field();
  for (std::size_t i = 0; i < big.order(); i += 11) EXPECT_EQ(embed(small.element(i), f84), big.element(i));
}

TEST(Conjugacy, J168ClassSizes) {
  const auto g = j168().descended();
  const auto cd = conjugacy_classes(g);
  std::multiset<std::size_t> sizes;
  for (const auto& c : cd.classes) sizes.insert(c.size);
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 21, 42, 56, 24, 24}));
  EXPECT_EQ(sizes, brute_force_class_sizes(g));
  EXPECT_EQ(cd.center_order, 1u);
}

TEST(Conjugacy, CenterAndQuotientOfJ504) {
  const auto g = j504().descended();
  const auto cd = conjugacy_classes(g);
  EXPECT_EQ(cd.center_order, 3u);
  EXPECT_EQ(g.scalar_subgroup().size(), 3u);
  EXPECT_EQ(g.collineation_order(), 168u);
  // same collineations as J168 once both live in one field
  EXPECT_EQ(j504().projective_key_set(), j168().projective_key_set());
  std::size_t total = 0;
  for (const auto& c : cd.classes) {
    total += c.size;
    EXPECT_EQ(168 % c.size, 0u);
  }
  EXPECT_EQ(total, 168u);
}

TEST(Conjugacy, AbelianGroup) {
  const auto f = field_make(4);
  const auto i = FieldElement::zeta(f, 1);
  const auto g = MatrixGroup::closure({Matrix3::diagonal(i, -i, FieldElement(f, 1L))});
  EXPECT_EQ(g.order(), 4u);
  const auto cd = conjugacy_classes(g);
  for (const auto& c : cd.classes) EXPECT_EQ(c.size, 1u);
  EXPECT_EQ(cd.center_order, 4u);
  const auto cert = simplicity_certificate(g, cd);
  EXPECT_FALSE(cert.simple);
  EXPECT_EQ(cert.witness_order, 2u);
}

TEST(ElementOrders, CollineationImage) {
  const auto g = j168().descended();
  std::set<std::size_t> orders;
  std::size_t involutions = 0;
  for (std::size_t c : g.projective_representatives()) {
    const auto o = g.collineation_element_order(c);
    orders.insert(o);
    EXPECT_EQ(168 % o, 0u);
    involutions += o == 2 ? 1 : 0;
  }
  EXPECT_EQ(orders, (std::set<std::size_t>{1, 2, 3, 4, 7}));
  EXPECT_EQ(involutions, 21u);
  for (std::size_t i = 0; i < g.order(); ++i) EXPECT_EQ(g.order() % g.element_order(i), 0u);
}

TEST(Simplicity, J168AndJ504) {
  const auto g = j168().descended();
  const auto cert = simplicity_certificate(g, conjugacy_classes(g));
  EXPECT_TRUE(cert.simple);
  // oracle: only 1 and 168 arise as subset sums 1 + (subset of the class sizes) dividing 168
  const std::vector<std::size_t> sizes{21, 42, 56, 24, 24};
  for (unsigned mask = 0; mask < 32; ++mask) {
    std::size_t s = 1;
    for (unsigned b = 0; b < 5; ++b)
      if (mask >> b & 1) s += sizes[b];
    if (168 % s == 0) {
      EXPECT_TRUE(s == 1 || s == 168) << s;
    }
  }
  const auto h = j504().descended();
  const auto c504 = simplicity_certificate(h, conjugacy_classes(h));
  EXPECT_FALSE(c504.simple);
  EXPECT_EQ(c504.witness_order, 3u);
}

TEST(Simplicity, NoSmallSymmetricImage) {
  const auto g = j168().descended();
  const auto cert = simplicity_certificate(g, conjugacy_classes(g));
  EXPECT_TRUE(no_small_symmetric_image(g, cert, 6));
  EXPECT_FALSE(no_small_symmetric_image(g, cert, 7));
  for (unsigned p = 2; p < 7; ++p) EXPECT_TRUE(no_small_symmetric_image(g, cert, p));
  const auto f = field_make(1);
  const auto t = MatrixGroup::closure({Matrix3::identity(f)});
  EXPECT_TRUE(no_small_symmetric_image(t, simplicity_certificate(t, conjugacy_classes(t)), 2));
  const auto h = j504().descended();
  EXPECT_THROW(no_small_symmetric_image(h, simplicity_certificate(h, conjugacy_classes(h)), 6), std::logic_error);
}

TEST(Dual, OrdersAndInvolution) {
  const auto g = j168().descended();
  const auto d = dual_representation(g);
  EXPECT_EQ(d.order(), 168u);
  EXPECT_EQ(element_key_set(dual_representation(d)), element_key_set(g));
  // permutation matrices are orthogonal: the dual is the same set
  const auto f = field_make(1);
  const auto s3 = MatrixGroup::closure(
      {Matrix3::from_integers(f, {0, 1, 0, 1, 0, 0, 0, 0, -1}), Matrix3::from_integers(f, {0, 0, 1, 1, 0, 0, 0, 1, 0})});
  EXPECT_EQ(element_key_set(dual_representation(s3)), element_key_set(s3));
}

TEST(FixtureFormat, RoundTripAndErrors) {
  const auto fx = fixture_j504();
  const auto back = fixture_from_json(json::parse(fixture_to_json(fx).dump()));
  EXPECT_EQ(back.conductor, 84u);
  ASSERT_EQ(back.generators.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(back.generators[k], fx.generators[k]);
  EXPECT_EQ(back.expected_order.value(), 504u);
  EXPECT_EQ(fixture_digest(back), fixture_digest(fx));
  EXPECT_NE(fixture_digest(fixture_j168()), fixture_digest(fx));
  EXPECT_THROW(fixture_from_json(json::parse(R"({"conductor": 0, "generators": []})")), FormatError);
  EXPECT_THROW(fixture_from_json(json::parse(R"({"generators": []})")), FormatError);
  EXPECT_THROW(load_fixture("/nonexistent/fixture.json"), FormatError);
}
