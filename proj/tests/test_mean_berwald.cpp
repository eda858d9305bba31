#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finslerlab/curvature.hpp"
#include "test_support.hpp"

namespace finslerlab {
namespace {

HomogeneousSpec solvable_2d() {
  const std::vector<BracketEntry> e{{0, 1, 1, 1.0}};
  return HomogeneousSpec::from_entries(2, Matrix::identity(2), e, {0.5, 0.0});
}

/// Second derivative of the Kropina S along y + t u at t = 0, from jets in t.
/// Quadratic forms are expanded by hand so nothing here goes through the
/// library's stencil code.
double second_directional(const HomogeneousSpec& spec, double m, const Vector& y, const Vector& u) {
  const Matrix& g = spec.metric();
  const TangentVector v(spec.v());
  const auto ad = [&](const Vector& x) {
    const auto w = bracket_m(spec, v, TangentVector(x));
    return Vector(w.components().begin(), w.components().end());
  };
  const auto quad = [&](const Vector& ay, const Vector& au) {  // <A(y+tu), y+tu>
    return Jet2::from_coefficients({bilinear<double>(g, ay, y),
                                    bilinear<double>(g, au, y) + bilinear<double>(g, ay, u),
                                    bilinear<double>(g, au, u)});
  };
  const Vector ay = ad(y), au = ad(u);
  const Jet2 a2 = Jet2::from_coefficients(
      {bilinear<double>(g, y, y), 2.0 * bilinear<double>(g, y, u), bilinear<double>(g, u, u)});
  const Jet2 alpha = sqrt(a2);
  const Jet2 beta = Jet2::from_coefficients({dot(lower<double>(g, spec.v()), y),
                                             dot(lower<double>(g, spec.v()), u), 0.0});
  const Jet2 p = quad(ay, au);
  const Jet2 r = Jet2::from_coefficients(
      {bilinear<double>(g, ay, spec.v()), bilinear<double>(g, au, spec.v()), 0.0});
  const double n = static_cast<double>(spec.n()), b2 = spec.b2();
  const Jet2 s = beta / alpha;
  const Jet2 d = (1.0 - m) * s * s + b2 * m;
  const Jet2 omega = m * s * ((n - n * m) * s * s + (n * m + 1.0) * b2) / (d * d);
  const Jet2 S = omega * (p / alpha - (m / (m + 1.0)) * r / s);
  return S.d2();
}

Matrix analytic_mean_berwald(const HomogeneousSpec& spec, double m, const TangentVector& y) {
  const std::size_t n = spec.n();
  const Vector yv(y.components().begin(), y.components().end());
  const auto e = [n](std::size_t i) {
    Vector x(n, 0.0);
    x[i] = 1.0;
    return x;
  };
  Vector diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = second_directional(spec, m, yv, e(i));
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        out(i, i) = 0.5 * diag[i];
        continue;
      }
      Vector u = e(i);
      u[j] = 1.0;
      out(i, j) = 0.25 * (second_directional(spec, m, yv, u) - diag[i] - diag[j]);
    }
  return out;
}

TEST(MeanBerwald, SolvableExampleOracle) {
  // exact value -26/27 [[1, -1], [-1, 1]] from symbolic differentiation of S
  const auto r = mean_berwald_oracle(solvable_2d(), PhiModel::kropina(2), {1.0, 1.0});
  const double e = 26.0 / 27.0;
  EXPECT_NEAR(r.E(0, 0), -e, 1e-9);
  EXPECT_NEAR(r.E(0, 1), e, 1e-9);
  EXPECT_NEAR(r.E(1, 0), e, 1e-9);
  EXPECT_NEAR(r.E(1, 1), -e, 1e-9);
  EXPECT_EQ(r.source, MeanBerwaldSource::oracle);
  EXPECT_EQ(r.asymmetry, 0.0);
  EXPECT_DOUBLE_EQ(r.step, 1e-4 * std::sqrt(2.0));
}

TEST(MeanBerwald, SolvableExampleClosedFormBothReadings) {
  const auto spec = solvable_2d();
  const TangentVector y{1.0, 1.0};
  const auto a = mean_berwald_closed(spec, 2.0, y, AReading::omega);
  const double e = 26.0 / 27.0;
  EXPECT_NEAR(a.E(0, 0), -e, 1e-12);
  EXPECT_NEAR(a.E(0, 1), e, 1e-12);
  EXPECT_NEAR(a.E(1, 1), -e, 1e-12);
  ASSERT_TRUE(a.residual_vs_oracle.has_value());
  EXPECT_LT(*a.residual_vs_oracle, 1e-8);
  EXPECT_LT(a.asymmetry, 1e-12);

  const auto b = mean_berwald_closed(spec, 2.0, y, AReading::first_summand);
  EXPECT_NEAR(b.E(0, 0), -0.67565335878219575, 1e-12);
  EXPECT_NEAR(b.E(0, 1), 0.96296296296296296, 1e-12);
  EXPECT_NEAR(b.E(1, 1), -0.67565335878219575, 1e-12);
  EXPECT_GT(*b.residual_vs_oracle, 0.1);
}

TEST(MeanBerwald, OracleMatchesAnalyticHessian) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = testing::random_spec(rng, 2 + trial % 3, 0.2, 0.8);
    const double m = trial % 3 == 0 ? -2.0 : (trial % 3 == 1 ? 2.0 : 0.5);
    const auto y = testing::random_valid_direction(rng, spec, PhiModel::kropina(m), 0.1);
    const auto oracle = mean_berwald_oracle(spec, PhiModel::kropina(m), y);
    const Matrix exact = analytic_mean_berwald(spec, m, y);
    const double scale = std::max(1.0, max_abs(exact));
    EXPECT_LE(max_abs_difference(oracle.E, exact), 1e-7 * scale) << "trial " << trial;
  }
}

TEST(MeanBerwald, ClosedFormMatchesOracleWhenAdVIsOrthogonalToV) {
  // Where <[v, e_i], v> = 0 for all i the printed closed form (A = Omega) agrees
  // with the oracle and is symmetric.
  const auto spec = solvable_2d();
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = testing::random_direction(rng, spec, 0.1);
    const auto c = mean_berwald_closed(spec, 2.0, y);
    EXPECT_LT(c.asymmetry, 1e-10);
    EXPECT_LT(*c.residual_vs_oracle, 1e-7 * std::max(1.0, max_abs(c.E)));
  }
}

TEST(MeanBerwald, ClosedFormResidualIsReportedNotAsserted) {
  // General brackets: the printed form is evaluated as written; residual and
  // asymmetry are finite numbers whatever their size.
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = testing::random_spec(rng, 3, 0.2, 0.8);
    const auto y = testing::random_direction(rng, spec, 0.1);
    for (auto reading : {AReading::omega, AReading::first_summand}) {
      const auto c = mean_berwald_closed(spec, 3.0, y, reading);
      EXPECT_TRUE(std::isfinite(*c.residual_vs_oracle));
      EXPECT_TRUE(std::isfinite(c.asymmetry));
    }
  }
}

TEST(MeanBerwald, FirstGroupHasDegreeMinusOne) {
  std::mt19937_64 rng(44);
  const auto spec = testing::random_spec(rng, 3, 0.2, 0.8);
  const auto y = testing::random_direction(rng, spec, 0.1);
  const auto g1 = mean_berwald_closed_terms(spec, 2.0, y);
  const auto g2 = mean_berwald_closed_terms(spec, 2.0, y.scaled(2.0));
  for (std::size_t k = 0; k < g1.size(); ++k)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        EXPECT_NEAR(g2[k](i, j), 0.5 * g1[k](i, j), 1e-12 * (1.0 + std::abs(g1[k](i, j))))
            << "group " << k;
}

TEST(MeanBerwald, AbelianIsExactlyZero) {
  const HomogeneousSpec spec(3, Matrix::identity(3), std::vector<double>(27, 0.0),
                             {0.3, 0.2, 0.1});
  const TangentVector y{1.0, 0.5, -0.25};
  const auto o = mean_berwald_oracle(spec, PhiModel::kropina(2), y);
  EXPECT_EQ(max_abs(o.E), 0.0);
  const auto c = mean_berwald_closed(spec, 2.0, y);
  EXPECT_EQ(max_abs(c.E), 0.0);
  EXPECT_EQ(*c.residual_vs_oracle, 0.0);
}

TEST(MeanBerwald, RiemannianIsZero) {
  std::mt19937_64 rng(45);
  const auto spec = testing::random_spec(rng, 4);
  const auto y = testing::random_direction(rng, spec);
  EXPECT_EQ(max_abs(mean_berwald_oracle(spec, PhiModel::riemannian(), y).E), 0.0);
}

TEST(MeanBerwald, ThreadedOracleIsBitIdentical) {
  std::mt19937_64 rng(46);
  const auto spec = testing::random_spec(rng, 5);
  const auto y = testing::random_direction(rng, spec);
  HessianOptions one, many;
  many.threads = 4;
  const auto a = mean_berwald_oracle(spec, PhiModel::kropina(2.5), y, one);
  const auto b = mean_berwald_oracle(spec, PhiModel::kropina(2.5), y, many);
  const auto ra = a.E.row_major(), rb = b.E.row_major();
  EXPECT_EQ(std::vector<double>(ra.begin(), ra.end()), std::vector<double>(rb.begin(), rb.end()));
}

TEST(MeanBerwald, StencilShrinksNearTheSingularCone) {
  const auto spec = solvable_2d();
  // beta / alpha = 3e-5: the default stencil (h = 1e-4) would cross beta = 0
  const TangentVector y{6e-5, 1.0};
  const auto r = mean_berwald_oracle(spec, PhiModel::kropina(2), y);
  const double alpha = alpha_beta_s(spec, y).alpha;
  EXPECT_LT(r.step, 1e-4 * alpha);
  EXPECT_GE(r.step, 1e-4 * alpha / 256.0);
}

TEST(MeanBerwald, StencilFailsInsideTheCone) {
  const auto spec = solvable_2d();
  EXPECT_THROW(mean_berwald_oracle(spec, PhiModel::kropina(2), {1e-9, 1.0}), StencilError);
  EXPECT_THROW(mean_berwald_oracle(spec, PhiModel::kropina(2), {0.0, 1.0}), SingularityError);
  EXPECT_THROW(mean_berwald_closed(spec, 2.0, {0.0, 1.0}), SingularityError);
  // Randers has no cone
  EXPECT_NO_THROW(mean_berwald_oracle(spec, PhiModel::randers(), {0.0, 1.0}));
}

TEST(MeanBerwaldProperty, EulerSymmetryAndDegree) {
  std::mt19937_64 rng(47);
  const std::vector<PhiModel> models{PhiModel::kropina(2), PhiModel::kropina(-1.5),
                                     PhiModel::randers(), PhiModel::kropina(3)};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto spec = testing::random_spec(rng, n, 0.3, 0.8);
    const auto& model = models[trial % models.size()];
    const auto y = testing::random_valid_direction(rng, spec, model, 0.1);
    const auto e1 = mean_berwald_oracle(spec, model, y);
    EXPECT_LE(e1.asymmetry, 1e-10);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += e1.E(i, j) * y[j];
      EXPECT_LE(std::abs(acc), 1e-8) << "trial " << trial;
    }
    const double lambda = 3.0;
    const auto e2 = mean_berwald_oracle(spec, model, y.scaled(lambda));
    const double scale = max_abs(e1.E);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_LE(std::abs(lambda * e2.E(i, j) - e1.E(i, j)), 1e-6 * scale) << "trial " << trial;
  }
}

}  // namespace
}  // namespace finslerlab
