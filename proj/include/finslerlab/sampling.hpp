#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "finslerlab/algebra.hpp"
#include "finslerlab/errors.hpp"
#include "finslerlab/linalg.hpp"

namespace finslerlab {

inline constexpr std::uint64_t default_seed = 42;

struct DirectionSampling {
  std::size_t count = 16;
  std::uint64_t seed = default_seed;
  /// Reject directions with |s| below this (keeps Kropina away from beta = 0).
  double min_abs_s = 1e-3;
  /// Replace y by -y whenever beta(y) < 0.
  bool positive_beta = false;
  std::size_t max_attempts_per_sample = 1000;
};

/// Directions uniformly distributed on the alpha-unit sphere: y = L^{-T} w with
/// w uniform on the Euclidean sphere and G = L L^T. May return fewer than
/// `count` directions if the rejection test keeps failing.
inline std::vector<TangentVector> sample_directions(const HomogeneousSpec& spec,
                                                    const DirectionSampling& opts) {
  const auto chol = cholesky(spec.metric());
  if (!chol) throw InputError("sample_directions: metric not positive definite");
  const std::size_t n = spec.n();

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<TangentVector> out;
  out.reserve(opts.count);

  std::size_t attempts = 0;
  const std::size_t max_attempts = opts.count * opts.max_attempts_per_sample;
  while (out.size() < opts.count && attempts++ < max_attempts) {
    Vector w(n);
    double norm2 = 0.0;
    for (double& x : w) {
      x = normal(rng);
      norm2 += x * x;
    }
    if (norm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : w) x *= inv;
    Vector y = solve_upper_transposed(*chol, w);

    const auto ab = alpha_beta<double>(spec, y);
    if (std::abs(ab.s) < opts.min_abs_s) continue;
    if (opts.positive_beta && ab.beta < 0.0)
      for (double& x : y) x = -x;
    out.emplace_back(std::move(y));
  }
  return out;
}

}  // namespace finslerlab
