#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "finslerlab/errors.hpp"

namespace finslerlab {

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1], by Newton
/// iteration on P_N from the Chebyshev initial guesses.
template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    const int half = (N + 1) / 2;
    for (int i = 0; i < half; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= N; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = N * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = -z;
      x[N - 1 - i] = z;
      w[i] = w[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if constexpr (N % 2 == 1) x[N / 2] = 0.0;
  }
};

inline const GaussLegendre<15>& gauss_legendre_15() {
  static const GaussLegendre<15> rule;
  return rule;
}

struct QuadratureOptions {
  double rel_tol = 1e-10;
  int max_depth = 30;
  int initial_panels = 1;
};

namespace detail {

template <class F>
double gl15_panel(const F& f, double a, double b) {
  const auto& rule = gauss_legendre_15();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(mid + half * rule.x[i]);
    if (!std::isfinite(fx)) throw DivergenceError("quadrature: integrand is not finite");
    sum += rule.w[i] * fx;
  }
  return half * sum;
}

template <class F>
double adaptive_gl15(const F& f, double a, double b, double whole, double abs_tol, int depth,
                     int max_depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl15_panel(f, a, mid);
  const double right = gl15_panel(f, mid, b);
  const double refined = left + right;
  if (std::abs(refined - whole) <= abs_tol) return refined;
  if (depth >= max_depth) throw DivergenceError("quadrature: no convergence at maximum depth");
  return adaptive_gl15(f, a, mid, left, 0.5 * abs_tol, depth + 1, max_depth) +
         adaptive_gl15(f, mid, b, right, 0.5 * abs_tol, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive composite 15-point Gauss-Legendre on [a, b]. A panel is accepted
/// when its two halves agree with it to within its share of rel_tol * |I|;
/// otherwise it is bisected, down to max_depth levels. |I| starts as the coarse
/// estimate; if the refined result comes out much smaller (a spike caught by a
/// coarse node) the pass is repeated with the tolerance taken from the result.
template <class F>
double integrate(const F& f, double a, double b, const QuadratureOptions& opts = {}) {
  const int panels = opts.initial_panels > 0 ? opts.initial_panels : 1;
  const double width = (b - a) / panels;

  std::array<double, 64> coarse_buf{};
  if (panels > static_cast<int>(coarse_buf.size()))
    throw InputError("quadrature: at most 64 initial panels");
  double estimate = 0.0;
  for (int p = 0; p < panels; ++p) {
    coarse_buf[p] = detail::gl15_panel(f, a + p * width, a + (p + 1) * width);
    estimate += coarse_buf[p];
  }

  double total = 0.0;
  for (int pass = 0; pass < 8; ++pass) {
    const double abs_tol = std::max(opts.rel_tol * std::abs(estimate), 1e-300);
    total = 0.0;
    for (int p = 0; p < panels; ++p)
      total += detail::adaptive_gl15(f, a + p * width, a + (p + 1) * width, coarse_buf[p],
                                     abs_tol / panels, 0, opts.max_depth);
    if (!std::isfinite(total)) throw DivergenceError("quadrature: result is not finite");
    if (std::abs(total) >= 0.5 * std::abs(estimate)) return total;
    estimate = total;
  }
  throw DivergenceError("quadrature: estimate does not settle");
}

}  // namespace finslerlab
