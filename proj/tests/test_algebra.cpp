#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finslerlab/algebra.hpp"
#include "finslerlab/linalg.hpp"
#include "test_support.hpp"

namespace finslerlab {
namespace {

HomogeneousSpec solvable_2d() {
  const std::vector<BracketEntry> e{{0, 1, 1, 1.0}};
  return HomogeneousSpec::from_entries(2, Matrix::identity(2), e, {0.5, 0.0});
}

TEST(Validate, TrivialSpecPasses) {
  const HomogeneousSpec spec(2, Matrix::identity(2), std::vector<double>(8, 0.0), {0.5, 0.0});
  const auto r = validate_spec(spec);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.first_failure(), "");
}

TEST(Validate, IndefiniteMetricFails) {
  const HomogeneousSpec spec(2, Matrix(2, {1.0, 0.0, 0.0, -2.0}), std::vector<double>(8, 0.0),
                             {0.5, 0.0});
  const auto r = validate_spec(spec);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.first_failure(), "metric not positive definite");
}

TEST(Validate, LongBetaVectorFails) {
  // <v, v> = 1.21
  const HomogeneousSpec spec(2, Matrix::identity(2), std::vector<double>(8, 0.0), {1.1, 0.0});
  const auto r = validate_spec(spec);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.first_failure().rfind("b >= 1", 0), 0u) << r.first_failure();
}

TEST(Validate, AsymmetricMetricAndBracketAreReported) {
  const HomogeneousSpec a(2, Matrix(2, {1.0, 0.1, 0.0, 1.0}), std::vector<double>(8, 0.0),
                          {0.5, 0.0});
  EXPECT_EQ(validate_spec(a).first_failure(), "metric not symmetric at (1,2)");

  std::vector<double> c(8, 0.0);
  c[(0 * 2 + 1) * 2 + 1] = 1.0;  // [e1,e2] = e2 without the [e2,e1] half
  const HomogeneousSpec b(2, Matrix::identity(2), c, {0.5, 0.0});
  EXPECT_EQ(validate_spec(b).first_failure(), "bracket not antisymmetric at c[1][2][2]");
}

TEST(Validate, ZeroVectorV) {
  const HomogeneousSpec spec(2, Matrix::identity(2), std::vector<double>(8, 0.0), {0.0, 0.0});
  EXPECT_FALSE(validate_spec(spec).passed());
}

TEST(Spec, ShapeErrors) {
  EXPECT_THROW(HomogeneousSpec(2, Matrix::identity(3), std::vector<double>(8), {0.5, 0.0}),
               InputError);
  EXPECT_THROW(HomogeneousSpec(2, Matrix::identity(2), std::vector<double>(7), {0.5, 0.0}),
               InputError);
  const std::vector<BracketEntry> bad{{1, 0, 1, 1.0}};
  EXPECT_THROW(HomogeneousSpec::from_entries(2, Matrix::identity(2), bad, {0.5, 0.0}),
               InputError);
}

TEST(Bracket, ReadsTheTable) {
  const auto spec = solvable_2d();
  const TangentVector e1{1.0, 0.0}, e2{0.0, 1.0};
  const auto a = bracket_m(spec, e1, e2);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 1.0);
  const auto b = bracket_m(spec, e2, e1);
  EXPECT_EQ(b[1], -1.0);
  EXPECT_FALSE(spec.is_abelian());
}

TEST(Bracket, AbelianGivesZero) {
  const HomogeneousSpec spec(3, Matrix::identity(3), std::vector<double>(27, 0.0),
                             {0.5, 0.0, 0.0});
  EXPECT_TRUE(spec.is_abelian());
  EXPECT_TRUE(bracket_m(spec, {1.0, 2.0, 3.0}, {-1.0, 0.5, 2.0}).is_zero());
}

TEST(Bracket, DimensionMismatch) {
  EXPECT_THROW(bracket_m(solvable_2d(), {1.0, 0.0, 0.0}, {1.0, 0.0}), InputError);
}

TEST(AlphaBeta, Examples) {
  const auto spec = solvable_2d();
  const auto ab = alpha_beta_s(spec, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(ab.alpha, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(ab.beta, 0.5);
  EXPECT_DOUBLE_EQ(ab.s, 0.5 / std::sqrt(2.0));

  const auto orth = alpha_beta_s(spec, {0.0, 3.0});
  EXPECT_EQ(orth.beta, 0.0);
  EXPECT_EQ(orth.s, 0.0);

  const auto along = alpha_beta_s(spec, TangentVector(spec.v()));
  EXPECT_DOUBLE_EQ(along.s, spec.b());
}

TEST(AlphaBeta, ZeroVectorIsAnInputError) {
  EXPECT_THROW(alpha_beta_s(solvable_2d(), {0.0, 0.0}), InputError);
  EXPECT_THROW(alpha_beta_s(solvable_2d(), {1.0}), InputError);
}

TEST(Linalg, CholeskyAndBilinear) {
  const Matrix g(2, {4.0, 2.0, 2.0, 3.0});
  const auto l = cholesky(g);
  ASSERT_TRUE(l.has_value());
  EXPECT_DOUBLE_EQ((*l)(0, 0), 2.0);
  EXPECT_DOUBLE_EQ((*l)(1, 0), 1.0);
  EXPECT_DOUBLE_EQ((*l)(1, 1), std::sqrt(2.0));
  const Vector x{1.0, 2.0}, y{3.0, -1.0};
  EXPECT_DOUBLE_EQ(bilinear<double>(g, x, y), 4.0 * 3 + 2.0 * (-1) + 2.0 * 2 * 3 + 3.0 * 2 * (-1));
  EXPECT_FALSE(cholesky(Matrix(2, {1.0, 2.0, 2.0, 1.0})).has_value());
}

TEST(AlgebraProperty, BracketIsAntisymmetricAndBilinear) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto spec = testing::random_spec(rng, n);
    Vector x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = nd(rng), y[i] = nd(rng), z[i] = nd(rng);
    const auto xy = bracket_m(spec, TangentVector(x), TangentVector(y));
    const auto yx = bracket_m(spec, TangentVector(y), TangentVector(x));
    Vector x2(n);
    for (std::size_t i = 0; i < n; ++i) x2[i] = 2.0 * x[i] + z[i];
    const auto lhs = bracket_m(spec, TangentVector(x2), TangentVector(y));
    const auto zy = bracket_m(spec, TangentVector(z), TangentVector(y));
    for (std::size_t k = 0; k < n; ++k) {
      const double scale = 1.0 + std::abs(xy[k]);
      EXPECT_LE(std::abs(xy[k] + yx[k]), 1e-14 * scale);
      EXPECT_LE(std::abs(lhs[k] - (2.0 * xy[k] + zy[k])), 1e-13 * (1.0 + std::abs(lhs[k])));
    }
  }
}

TEST(AlgebraProperty, CauchySchwarzAndHomogeneity) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto spec = testing::random_spec(rng, n);
    ASSERT_TRUE(validate_spec(spec).passed());
    Vector y(n);
    for (double& c : y) c = nd(rng);
    const auto ab = alpha_beta_s(spec, TangentVector(y));
    EXPECT_LE(std::abs(ab.s), spec.b() + 1e-12);
    for (double lambda : {0.5, 2.0, 10.0}) {
      const auto sc = alpha_beta_s(spec, TangentVector(y).scaled(lambda));
      EXPECT_LE(testing::rel_err(sc.alpha, lambda * ab.alpha), 1e-12);
      EXPECT_LE(testing::rel_err(sc.beta, lambda * ab.beta), 1e-12);
      EXPECT_LE(testing::rel_err(sc.s, ab.s), 1e-12);
    }
  }
}

}  // namespace
}  // namespace finslerlab
