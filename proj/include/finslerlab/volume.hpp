#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <variant>

#include "finslerlab/errors.hpp"
#include "finslerlab/phi.hpp"
#include "finslerlab/quadrature.hpp"

namespace finslerlab {

namespace volume {

struct BusemannHausdorff {};

/// The Holmes-Thompson coefficient needs an integrand T(b cos t) that the
/// caller has to provide.
struct HolmesThompson {
  std::function<double(double)> T;
};

}  // namespace volume

using VolumeFormKind = std::variant<volume::BusemannHausdorff, volume::HolmesThompson>;

/// f(b) for the chosen volume form:
///   BH: int_0^pi sin^{n-2} t dt / int_0^pi sin^{n-2} t / phi(b cos t)^n dt
///   HT: int_0^pi sin^{n-2} t T(b cos t) dt / int_0^pi sin^{n-2} t dt
inline double f_of_b(const PhiModel& model, double b, int n, const VolumeFormKind& kind,
                     const QuadratureOptions& opts = {}) {
  if (!(b > 0.0 && b < 1.0)) throw InputError("f_of_b: need 0 < b < 1");
  if (n < 2) throw InputError("f_of_b: need n >= 2");

  const auto weight = [n](double t) { return n == 2 ? 1.0 : std::pow(std::sin(t), n - 2); };
  const double base = integrate(weight, 0.0, std::numbers::pi, opts);

  if (const auto* ht = std::get_if<volume::HolmesThompson>(&kind)) {
    if (!ht->T) throw InputError("f_of_b: Holmes-Thompson needs an integrand T");
    const double num =
        integrate([&](double t) { return weight(t) * ht->T(b * std::cos(t)); }, 0.0,
                  std::numbers::pi, opts);
    return num / base;
  }

  const auto integrand = [&](double t) {
    const double s = b * std::cos(t);
    if (!model.in_domain(s)) {
      if (s == 0.0) {
        // phi^-n = s^{mn} for kropina: the limit at s = 0 is 0 when mn > 0
        if (model.is_kropina() && model.kropina_m() * n > 0.0) return 0.0;
        throw DivergenceError("f_of_b: phi^-n is unbounded at b cos t = 0");
      }
      throw DomainError("f_of_b: phi(b cos t) is not real on part of (0, pi)");
    }
    const double phi = model.value(s);
    if (!(phi > 0.0)) throw DomainError("f_of_b: phi(b cos t) must be positive");
    return weight(t) / std::pow(phi, n);
  };
  const double denom = integrate(integrand, 0.0, std::numbers::pi, opts);
  const double f = base / denom;
  if (!std::isfinite(f) || !(f > 0.0)) throw DivergenceError("f_of_b: non-finite ratio");
  return f;
}

/// f'(b) / (b f(b)) by a central difference of log f at step 1e-5 b.
inline double fb_log_derivative(const PhiModel& model, double b, int n,
                                const VolumeFormKind& kind, const QuadratureOptions& opts = {}) {
  const double h = 1e-5 * b;
  if (!(b + h < 1.0)) throw InputError("fb_log_derivative: stencil leaves b < 1");
  const double fp = f_of_b(model, b + h, n, kind, opts);
  const double fm = f_of_b(model, b - h, n, kind, opts);
  return (std::log(fp) - std::log(fm)) / (2.0 * h) / b;
}

}  // namespace finslerlab
