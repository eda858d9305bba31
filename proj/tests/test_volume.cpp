#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "finslerlab/volume.hpp"
#include "test_support.hpp"

namespace finslerlab {
namespace {

const VolumeFormKind bh = volume::BusemannHausdorff{};

TEST(Quadrature, GaussLegendreRuleIsExactForPolynomials) {
  // 15 points integrate degree 29 exactly
  QuadratureOptions o;
  const double i = integrate([](double x) { return std::pow(x, 28) + x; }, -1.0, 1.0, o);
  EXPECT_NEAR(i, 2.0 / 29.0, 1e-15);
  double wsum = 0.0;
  for (double w : gauss_legendre_15().w) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-15);
}

TEST(Quadrature, AdaptiveRefinement) {
  // a narrow peak at 0.3 forces bisection
  const double eps = 1e-6, r = std::sqrt(eps);
  const double i = integrate([&](double x) { return 1.0 / (eps + (x - 0.3) * (x - 0.3)); }, 0.0, 1.0);
  EXPECT_LE(testing::rel_err(i, (std::atan(0.7 / r) + std::atan(0.3 / r)) / r), 1e-10);
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0, 1e-14);
}

TEST(Quadrature, StableUnderPanelDoubling) {
  const auto f = [](double t) { return std::sin(t) / std::pow(1.0 + 0.7 * std::cos(t), 4); };
  QuadratureOptions one, two;
  two.initial_panels = 2;
  const double a = integrate(f, 0.0, std::numbers::pi, one);
  const double b = integrate(f, 0.0, std::numbers::pi, two);
  EXPECT_LE(testing::rel_err(a, b), 1e-9);
}

TEST(Quadrature, NonFiniteIntegrandDiverges) {
  EXPECT_THROW(integrate([](double x) { return 1.0 / x; }, -1.0, 1.0), DivergenceError);
  QuadratureOptions shallow;
  shallow.max_depth = 2;
  EXPECT_THROW(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, shallow),
               DivergenceError);
}

TEST(Volume, RiemannianIsOne) {
  for (int n = 2; n <= 8; ++n)
    EXPECT_NEAR(f_of_b(PhiModel::riemannian(), 0.6, n, bh), 1.0, 1e-12) << "n=" << n;
  EXPECT_EQ(fb_log_derivative(PhiModel::riemannian(), 0.6, 4, bh), 0.0);
}

TEST(Volume, RandersClosedForm) {
  // int_0^pi sin t (1 + b cos t)^-3 dt = [(1 + b cos t)^-2 / (2b)]_0^pi = 2 / (1 - b^2)^2
  EXPECT_NEAR(f_of_b(PhiModel::randers(), 0.5, 3, bh), 9.0 / 16.0, 1e-9);
  for (double b : {0.1, 0.3, 0.8})
    EXPECT_NEAR(f_of_b(PhiModel::randers(), b, 3, bh), (1 - b * b) * (1 - b * b), 1e-9);
  EXPECT_NEAR(f_of_b(PhiModel::randers(), 1e-6, 3, bh), 1.0, 1e-9);
}

TEST(Volume, RandersLogDerivative) {
  // d/db log((1 - b^2)^2) / b = -4 / (1 - b^2)
  EXPECT_NEAR(fb_log_derivative(PhiModel::randers(), 0.5, 3, bh), -16.0 / 3.0, 1e-6);
}

TEST(Volume, IntegerKropina) {
  // m = 2, n = 2: f = pi / int_0^pi (b cos t)^4 dt = pi / (b^4 3 pi / 8) = 8 / (3 b^4)
  const double b = 0.5;
  EXPECT_NEAR(f_of_b(PhiModel::kropina(2), b, 2, bh), 8.0 / (3.0 * std::pow(b, 4)), 1e-9);
}

TEST(Volume, KropinaFailures) {
  // non-integer m: phi(b cos t) is not real for cos t < 0
  EXPECT_THROW(f_of_b(PhiModel::kropina(2.5), 0.5, 3, bh), DomainError);
  // m < 0: (b cos t)^{mn} is unbounded at t = pi/2
  EXPECT_THROW(f_of_b(PhiModel::kropina(-2), 0.5, 3, bh), DivergenceError);
}

TEST(Volume, HolmesThompsonNeedsT) {
  const VolumeFormKind ht_none = volume::HolmesThompson{};
  EXPECT_THROW(f_of_b(PhiModel::randers(), 0.5, 3, ht_none), InputError);
  // T = 1 gives 1; T(x) = x^2 with n = 3 gives b^2 int sin cos^2 / int sin = b^2 / 3
  const VolumeFormKind one = volume::HolmesThompson{[](double) { return 1.0; }};
  EXPECT_NEAR(f_of_b(PhiModel::randers(), 0.5, 3, one), 1.0, 1e-13);
  const VolumeFormKind sq = volume::HolmesThompson{[](double x) { return x * x; }};
  EXPECT_NEAR(f_of_b(PhiModel::randers(), 0.5, 3, sq), 0.25 / 3.0, 1e-12);
}

TEST(Volume, LogDerivativeIsScaleInvariant) {
  // scaling T by a constant scales f but leaves f'/(b f) alone
  const VolumeFormKind t1 = volume::HolmesThompson{[](double x) { return 1.0 + x * x; }};
  const VolumeFormKind t5 = volume::HolmesThompson{[](double x) { return 5.0 * (1.0 + x * x); }};
  const double a = fb_log_derivative(PhiModel::randers(), 0.4, 3, t1);
  const double b = fb_log_derivative(PhiModel::randers(), 0.4, 3, t5);
  EXPECT_LE(testing::rel_err(a, b), 1e-9);
}

TEST(Volume, InputErrors) {
  EXPECT_THROW(f_of_b(PhiModel::randers(), 1.0, 3, bh), InputError);
  EXPECT_THROW(f_of_b(PhiModel::randers(), 0.5, 1, bh), InputError);
}

TEST(VolumeProperty, PositiveAndPanelStable) {
  QuadratureOptions two;
  two.initial_panels = 2;
  for (int n = 2; n <= 6; ++n)
    for (double b : {0.2, 0.5, 0.9}) {
      const auto model = PhiModel::polynomial({1.0, 0.3, 0.2});
      const double a = f_of_b(model, b, n, bh);
      EXPECT_GT(a, 0.0);
      EXPECT_LE(testing::rel_err(a, f_of_b(model, b, n, bh, two)), 1e-9);
    }
}

}  // namespace
}  // namespace finslerlab
