#include "kleincert/cyclotomic.hpp"
#include "kleincert/linalg.hpp"
#include "kleincert/matrix3.hpp"
#include "kleincert/serialize.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace kleincert;

namespace {

// Oracle: phi(n) by counting units mod n.
unsigned totient_by_count(unsigned n) {
  unsigned c = 0;
  for (unsigned k = 1; k <= n; ++k) c += std::gcd(k, n) == 1 ? 1 : 0;
  return c;
}

FieldElement random_element(const FieldPtr& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  std::vector<Rational> c;
  for (std::size_t i = 0; i < f->degree(); ++i) c.push_back(rational(num(rng), den(rng)));
  return FieldElement::from_coords(f, c);
}

FieldElement gauss_sum7(const FieldPtr& f) {
  auto z = [&](long k) { return root_of_unity(f, 7, k); };
  return z(1) + z(2) + z(4) - z(3) - z(5) - z(6);
}

}  // namespace

TEST(Rational, CanonicalText) {
  EXPECT_EQ(to_string(parse_rational("6/-4")), "-3/2");
  EXPECT_EQ(to_string(parse_rational("0/7")), "0/1");
  EXPECT_EQ(to_string(parse_rational("12")), "12/1");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(FieldMake, Degrees) {
  EXPECT_EQ(field_make(1)->degree(), 1u);
  EXPECT_EQ(field_make(1)->minimal_polynomial(), (std::vector<Integer>{-1, 1}));
  EXPECT_EQ(field_make(7)->minimal_polynomial(), (std::vector<Integer>{1, 1, 1, 1, 1, 1, 1}));
  for (unsigned n : {2u, 3u, 4u, 12u, 21u, 60u, 84u, 105u})
    EXPECT_EQ(field_make(n)->degree(), totient_by_count(n)) << n;
  EXPECT_EQ(field_make(84)->degree(), 24u);
  EXPECT_THROW(field_make(0), std::invalid_argument);
}

TEST(FieldMake, PhiDividesXnMinusOne) {
  // x^n reduces to 1 modulo Phi_n
  for (unsigned n : {1u, 6u, 9u, 84u}) {
    const auto f = field_make(n);
    std::vector<Integer> p(n + 1, 0);
    p[n] = 1;
    f->reduce(p);
    std::vector<Integer> one(f->degree(), 0);
    one[0] = 1;
    EXPECT_EQ(p, one) << n;
  }
}

TEST(FieldArithmetic, SpecExamples) {
  const auto f7 = field_make(7);
  EXPECT_TRUE((FieldElement::zeta(f7, 1) * FieldElement::zeta(f7, 6)).is_one());
  EXPECT_EQ(gauss_sum7(f7) * gauss_sum7(f7), FieldElement(f7, -7L));
  const auto f3 = field_make(3);
  EXPECT_TRUE((FieldElement(f3, 1L) + FieldElement::zeta(f3, 1) + FieldElement::zeta(f3, 2)).is_zero());
  // the same identity inside Q(zeta_84)
  const auto f84 = field_make(84);
  EXPECT_EQ(gauss_sum7(f84) * gauss_sum7(f84), FieldElement(f84, -7L));
}

TEST(FieldArithmetic, Errors) {
  const auto f7 = field_make(7), f5 = field_make(5);
  EXPECT_THROW(FieldElement(f7).inverse(), DivisionByZero);
  EXPECT_THROW(FieldElement(f7, 1L) / FieldElement(f7), DivisionByZero);
  EXPECT_THROW(FieldElement(f7, 1L) + FieldElement(f5, 1L), FieldMismatch);
}

TEST(FieldArithmetic, AxiomsRandomized) {
  std::mt19937_64 rng(7);
  for (unsigned n : {5u, 12u, 21u, 84u}) {
    const auto f = field_make(n);
    for (int t = 0; t < 6; ++t) {
      const auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a + b, b + a);
      EXPECT_TRUE((a - a).is_zero());
      if (!a.is_zero()) {
        EXPECT_TRUE((a * a.inverse()).is_one());
      }
      if (!b.is_zero()) {
        EXPECT_EQ((a / b) * b, a);
      }
    }
  }
}

TEST(FieldArithmetic, CanonicalForm) {
  std::mt19937_64 rng(11);
  const auto f = field_make(21);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_element(f, rng), b = random_element(f, rng);
    // rebuilding from coordinates is idempotent
    const auto again = FieldElement::from_coords(f, a.coords());
    EXPECT_EQ(again, a);
    EXPECT_EQ(again.key(), a.key());
    EXPECT_EQ(a == b, (a - b).is_zero());
  }
  // an unreduced representation of zero: 1 + zeta_3 + zeta_3^2
  const auto f3 = field_make(3);
  EXPECT_TRUE(FieldElement::from_integers(f3, {1, 1, 1}).is_zero());
}

TEST(FieldArithmetic, EmbeddingIsHomomorphism) {
  std::mt19937_64 rng(3);
  for (auto [n, m] : {std::pair{7u, 84u}, std::pair{3u, 21u}, std::pair{4u, 12u}, std::pair{21u, 84u}}) {
    const auto fn = field_make(n), fm = field_make(m);
    for (int t = 0; t < 5; ++t) {
      const auto a = random_element(fn, rng), b = random_element(fn, rng);
      EXPECT_EQ(embed(a + b, fm), embed(a, fm) + embed(b, fm));
      EXPECT_EQ(embed(a * b, fm), embed(a, fm) * embed(b, fm));
      if (!b.is_zero()) {
        EXPECT_EQ(embed(a / b, fm), embed(a, fm) / embed(b, fm));
      }
      // and descent inverts it
      SubfieldDescent d(fm, fn);
      EXPECT_EQ(d(embed(a, fm)).value(), a);
    }
  }
  EXPECT_THROW(embed(FieldElement(field_make(5), 1L), field_make(7)), FieldMismatch);
}

TEST(FieldArithmetic, RootsOfUnity) {
  const auto f21 = field_make(21);
  // zeta_42 in Q(zeta_21)
  const auto z = root_of_unity(f21, 42, 1);
  EXPECT_TRUE(z.pow(42).is_one());
  EXPECT_FALSE(z.pow(21).is_one());
  EXPECT_EQ(z.pow(21), FieldElement(f21, -1L));
  EXPECT_NEAR(std::arg(z.to_complex()), 2 * std::numbers::pi / 42, 1e-12);
  EXPECT_THROW(root_of_unity(field_make(7), 3, 1), std::invalid_argument);
}

TEST(FieldArithmetic, MinimalConductor) {
  const auto f84 = field_make(84);
  const std::vector<FieldElement> xs{root_of_unity(f84, 7, 1), FieldElement(f84, rational(1, 2))};
  EXPECT_EQ(minimal_conductor(xs), 7u);
  const std::vector<FieldElement> ys{root_of_unity(f84, 3, 1), root_of_unity(f84, 4, 1)};
  EXPECT_EQ(minimal_conductor(ys), 12u);
  // sqrt(-7) already lives in Q(zeta_7)
  const std::vector<FieldElement> g{gauss_sum7(f84)};
  EXPECT_EQ(minimal_conductor(g), 7u);
}

TEST(Matrix3Ops, SpecExamples) {
  const auto f = field_make(7);
  const auto e = [&](long k) { return FieldElement::zeta(f, k); };
  const Matrix3 tau = Matrix3::diagonal(e(1), e(2), e(4));
  EXPECT_TRUE(tau.det().is_one());
  const Matrix3 chi = Matrix3::from_integers(f, {0, 0, 1, 1, 0, 0, 0, 1, 0});
  EXPECT_TRUE(chi.det().is_one());
  const auto id = Matrix3::identity(f);
  EXPECT_EQ(id * id, id);
  EXPECT_EQ(matrix_order(tau, 100).value(), 7u);
  EXPECT_EQ(matrix_order(chi, 100).value(), 3u);
  EXPECT_EQ(matrix_order(id, 5).value(), 1u);
  EXPECT_FALSE(matrix_order(Matrix3::scalar(FieldElement(f, 2L)), 50).has_value());
}

TEST(Matrix3Ops, InverseTransposeCharPoly) {
  std::mt19937_64 rng(5);
  const auto f = field_make(12);
  for (int t = 0; t < 5; ++t) {
    std::array<FieldElement, 9> e;
    for (auto& x : e) x = random_element(f, rng);
    const Matrix3 m(e);
    if (m.det().is_zero()) continue;
    EXPECT_TRUE((m * m.inverse()).is_identity());
    EXPECT_EQ(m.transpose().transpose(), m);
    EXPECT_EQ((m * m).det(), m.det() * m.det());
    // Cayley-Hamilton
    const auto c = m.char_poly();
    const Matrix3 ch = m * m * m + (m * m).scaled(c[2]) + m.scaled(c[1]) + Matrix3::scalar(c[0]);
    EXPECT_EQ(ch, Matrix3::zero(f));
  }
  EXPECT_THROW(Matrix3::zero(f).inverse(), SingularMatrix);
}

TEST(Matrix3Ops, Kernel) {
  const auto f = field_make(7);
  const auto e = [&](long k) { return FieldElement::zeta(f, k); };
  EXPECT_EQ(matrix_kernel(Matrix3::zero(f)).size(), 3u);
  const Matrix3 tau = Matrix3::diagonal(e(1), e(2), e(4));
  const auto k = matrix_kernel(tau - Matrix3::scalar(e(1)));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_FALSE(k[0][0].is_zero());
  EXPECT_TRUE(k[0][1].is_zero());
  EXPECT_TRUE(k[0][2].is_zero());
  EXPECT_TRUE(matrix_kernel(tau).empty());
  // rank-one matrix: every row a multiple of (1, zeta, 2)
  const Vec3 r{FieldElement(f, 1L), e(1), FieldElement(f, 2L)};
  std::array<FieldElement, 9> m;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m[3 * i + j] = r[j] * FieldElement(f, static_cast<long>(i + 1));
  const auto k1 = matrix_kernel(Matrix3(m));
  ASSERT_EQ(k1.size(), 2u);
  for (const auto& v : k1) EXPECT_TRUE(dot(r, v).is_zero());
}

TEST(Matrix3Ops, KernelMatchesGaussJordan) {
  std::mt19937_64 rng(9);
  const auto f = field_make(5);
  for (int t = 0; t < 10; ++t) {
    // rank-2 matrix: third row a combination of the first two
    std::array<FieldElement, 9> e;
    for (std::size_t i = 0; i < 6; ++i) e[i] = random_element(f, rng);
    const auto a = random_element(f, rng), b = random_element(f, rng);
    for (std::size_t j = 0; j < 3; ++j) e[6 + j] = a * e[j] + b * e[3 + j];
    const Matrix3 m(e);
    const auto k = matrix_kernel(m);
    DenseMatrix<FieldElement> d(3);
    for (std::size_t i = 0; i < 3; ++i) d[i] = {m(i, 0), m(i, 1), m(i, 2)};
    EXPECT_EQ(k.size(), 3 - rank_of(d));
    for (const auto& v : k) EXPECT_TRUE(is_zero_vector(m.apply(v)));
  }
}

TEST(Serialization, RoundTrip) {
  std::mt19937_64 rng(1);
  const auto f = field_make(84);
  for (int t = 0; t < 5; ++t) {
    const auto x = random_element(f, rng);
    const auto j = to_json(x);
    EXPECT_EQ(j.at("conductor"), 84);
    EXPECT_EQ(j.at("coords").size(), 24u);
    EXPECT_EQ(field_element_from_json(j), x);
    EXPECT_EQ(to_json(field_element_from_json(json::parse(j.dump()))).dump(), j.dump());
  }
  std::array<FieldElement, 9> e;
  for (auto& x : e) x = random_element(f, rng);
  const Matrix3 m(e);
  EXPECT_EQ(matrix_from_json(to_json(m)), m);
  EXPECT_THROW(field_element_from_json(json{{"conductor", 3}, {"coords", {"1/2"}}}), FormatError);
  EXPECT_THROW(field_element_from_json(json{{"conductor", 3}, {"coords", {"1/0", "1"}}}), FormatError);
}
