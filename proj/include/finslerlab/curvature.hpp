#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "finslerlab/algebra.hpp"
#include "finslerlab/errors.hpp"
#include "finslerlab/finite_difference.hpp"
#include "finslerlab/jet.hpp"
#include "finslerlab/linalg.hpp"
#include "finslerlab/phi.hpp"
#include "finslerlab/sampling.hpp"

namespace finslerlab {

// ---------------------------------------------------------------------------
// S-curvature in local coordinates

/// Covariant-derivative data of beta at one point.
struct CovDerivData {
  Matrix r;                  // r_ij, symmetric
  Matrix s_mat;              // s_ij, antisymmetric
  Vector r0_plus_s0_coeffs;  // r_j + s_j
  Vector b_upper;            // b^i, used for s_j = b^i s_ij
  double b = 0.0;
  double fb_log_deriv = 0.0;  // f'(b) / (b f(b))
};

inline void check_cov_deriv_data(const CovDerivData& d, std::size_t n) {
  if (d.r.size() != n || d.s_mat.size() != n || d.r0_plus_s0_coeffs.size() != n ||
      d.b_upper.size() != n)
    throw InputError("cov-deriv data: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (d.r(i, j) != d.r(j, i)) throw InputError("cov-deriv data: r_ij is not symmetric");
      if (d.s_mat(i, j) != -d.s_mat(j, i))
        throw InputError("cov-deriv data: s_ij is not antisymmetric");
    }
}

/// S = (2 psi - f'(b)/(b f(b))) (r_0 + s_0) - alpha^{-1} Phi / (2 Delta^2) (r_00 - 2 alpha Q s_0)
inline double s_curvature_local(const AlphaBetaScalars<>& sc, const CovDerivData& data,
                                const TangentVector& y, double alpha) {
  const std::size_t n = y.size();
  check_cov_deriv_data(data, n);
  const auto yc = y.components();

  double r0_plus_s0 = 0.0;
  for (std::size_t j = 0; j < n; ++j) r0_plus_s0 += data.r0_plus_s0_coeffs[j] * yc[j];

  const double r00 = bilinear<double>(data.r, yc, yc);

  double s0 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double sj = 0.0;
    for (std::size_t i = 0; i < n; ++i) sj += data.b_upper[i] * data.s_mat(i, j);
    s0 += sj * yc[j];
  }

  return (2.0 * sc.psi - data.fb_log_deriv) * r0_plus_s0 -
         (1.0 / alpha) * sc.Phi / (2.0 * sc.Delta * sc.Delta) * (r00 - 2.0 * alpha * sc.Q * s0);
}

// ---------------------------------------------------------------------------
// S-curvature of a homogeneous (alpha, beta) space at the origin

namespace detail {

template <class T>
struct Pairings {
  T with_y;  // <[v, y]_m, y>
  T with_v;  // <[v, y]_m, v>
};

template <class T>
Pairings<T> bracket_pairings(const HomogeneousSpec& spec, std::span<const T> y) {
  const std::vector<T> v(spec.v().begin(), spec.v().end());
  const std::vector<T> w = bracket<T>(spec, std::span<const T>(v), y);
  return {bilinear<T>(spec.metric(), std::span<const T>(w), y),
          bilinear<T>(spec.metric(), std::span<const T>(w), std::span<const T>(v))};
}

template <class T>
void require_regular_direction(const HomogeneousSpec& spec, const PhiModel& model,
                               std::span<const T> y, const AlphaBeta<T>& ab) {
  require_dim(spec, y.size(), "s-curvature");
  if (!(ab.alpha > T(0))) throw InputError("s-curvature: zero tangent vector");
  if (model.is_singular() && ab.beta == T(0))
    throw SingularityError("s-curvature: singular direction, beta(y) = 0");
}

}  // namespace detail

/// S(H, y) = Phi / (2 alpha Delta^2) (<[v,y], y> + alpha Q <[v,y], v>) with the
/// scalars taken from the generic jet pipeline at s = beta/alpha.
template <class T>
T s_curvature_generic_t(const HomogeneousSpec& spec, const PhiModel& model,
                        std::span<const T> y) {
  const auto ab = alpha_beta<T>(spec, y);
  detail::require_regular_direction(spec, model, y, ab);
  const std::vector<T> v(spec.v().begin(), spec.v().end());
  const T b2 = bilinear<T>(spec.metric(), std::span<const T>(v), std::span<const T>(v));
  const auto sc = ab_scalars_generic<T>(model, ab.s, b2, static_cast<int>(spec.n()));
  const auto pr = detail::bracket_pairings<T>(spec, y);
  return sc.Phi / (T(2) * ab.alpha * sc.Delta * sc.Delta) *
         (pr.with_y + ab.alpha * sc.Q * pr.with_v);
}

inline double s_curvature_generic(const HomogeneousSpec& spec, const PhiModel& model,
                                  const TangentVector& y) {
  return s_curvature_generic_t<double>(spec, model, y.components());
}

/// Closed form for phi = s^{-m}:
/// Omega [ <[v,y], y> / alpha - m / ((m+1) s) <[v,y], v> ],
/// Omega = m s [(n - nm) s^2 + (nm + 1) b^2] / [(1 - m) s^2 + b^2 m]^2.
template <class T>
T s_curvature_kropina_t(const HomogeneousSpec& spec, double m, std::span<const T> y) {
  if (m == -1.0 || m == 0.0 || m == 1.0) throw InputError("kropina: m must not be -1, 0 or 1");
  const auto ab = alpha_beta<T>(spec, y);
  detail::require_dim(spec, y.size(), "s-curvature");
  if (!(ab.alpha > T(0))) throw InputError("s-curvature: zero tangent vector");
  if (ab.beta == T(0)) throw SingularityError("s-curvature: singular direction, beta(y) = 0");
  if (ab.beta < T(0) && !is_integer_valued(m))
    throw DomainError("kropina: s^-m is not real for s < 0 and non-integer m");

  const std::vector<T> v(spec.v().begin(), spec.v().end());
  const T b2 = bilinear<T>(spec.metric(), std::span<const T>(v), std::span<const T>(v));
  const T mm = static_cast<T>(m);
  const T n = static_cast<T>(spec.n());
  const T s = ab.s;
  const T denom = (T(1) - mm) * s * s + b2 * mm;
  if (denom == T(0)) throw DegenerateMetricError("kropina: (1-m)s^2 + b^2 m vanishes");
  const T omega = mm * s * ((n - n * mm) * s * s + (n * mm + T(1)) * b2) / (denom * denom);
  const auto pr = detail::bracket_pairings<T>(spec, y);
  return omega * (pr.with_y / ab.alpha - mm / ((mm + T(1)) * s) * pr.with_v);
}

inline double s_curvature_kropina(const HomogeneousSpec& spec, double m, const TangentVector& y) {
  return s_curvature_kropina_t<double>(spec, m, y.components());
}

// ---------------------------------------------------------------------------
// Omega and its derivatives

struct OmegaBundle {
  double s;
  double b2;
  double m;
  int n;
  double omega;
  double omega_d1;  // dOmega/ds
  double omega_d2;  // d^2 Omega/ds^2
};

inline OmegaBundle omega_bundle(double m, double s, double b2, int n) {
  const Jet2 x = Jet2::variable(s);
  const double nn = n;
  const Jet2 denom = (1.0 - m) * x * x + Jet2(b2 * m);
  const double scale = std::abs((1.0 - m) * s * s) + std::abs(b2 * m);
  if (std::abs(denom.val()) <= 1e-14 * scale)
    throw DegenerateMetricError("omega: (1-m)s^2 + b^2 m vanishes");
  const Jet2 numer = m * x * ((nn - nn * m) * x * x + Jet2((nn * m + 1.0) * b2));
  const Jet2 omega = numer / (denom * denom);
  return {s, b2, m, n, omega.val(), omega.d1(), omega.d2()};
}

namespace printed {

/// Bracketed polynomial of the printed first-derivative display, over [(1-m)s^2 + b^2 m]^3.
inline double omega_first_factor(double m, double s, double b2, int n) {
  const double nn = n, om = 1.0 - m, b4 = b2 * b2;
  const double poly = 3.0 * m * nn * om * om * std::pow(s, 4) +
                      m * om * (1.0 + nn * m + 3.0 * m * nn * b2) * s * s -
                      4.0 * m * nn * om * std::pow(s, 3) + m * (nn * m + 1.0) * b2 * s +
                      m * m * (nn * m + 1.0) * b4;
  const double d = om * s * s + b2 * m;
  return poly / (d * d * d);
}

/// Bracketed polynomial of the printed second-derivative display, over [(1-m)s^2 + b^2 m]^4.
inline double omega_second_factor(double m, double s, double b2, int n) {
  const double nn = n, om = 1.0 - m, b4 = b2 * b2;
  const double poly = -6.0 * m * nn * om * om * om * std::pow(s, 5) +
                      12.0 * m * nn * om * om * std::pow(s, 4) -
                      4.0 * m * om * om * (1.0 + nn * m) * std::pow(s, 3) -
                      m * om * (5.0 + 17.0 * m * nn) * b2 * s * s +
                      2.0 * m * m * om * (m * nn - 2.0) * b2 * s + m * m * (1.0 + m * nn) * b4;
  const double d = om * s * s + b2 * m;
  return poly / (d * d * d * d);
}

}  // namespace printed

struct OmegaYDerivatives {
  Vector s_y;   // ds/dy^i = (alpha b_i - s y_i) / alpha^2
  Matrix s_yy;  // d^2 s/dy^i dy^j
  Vector chain_j;
  Matrix chain_ij;
  Vector printed_j;
  Matrix printed_ij;
  double discrepancy_j = 0.0;   // max |printed_j - chain_j|
  double discrepancy_ij = 0.0;  // max |printed_ij - chain_ij|
};

/// y-derivatives of Omega(s(y)) two ways: the chain rule through the s-jet
/// (reference), and the printed polynomial displays evaluated as written.
/// Indices are lowered with the metric (y_i = a_ij y^j, b_i = a_ij v^j).
inline OmegaYDerivatives omega_y_derivatives(const OmegaBundle& bundle, double alpha,
                                             const TangentVector& y, const TangentVector& v,
                                             const Matrix& metric) {
  if (!(alpha > 0.0)) throw InputError("omega_y_derivatives: alpha must be positive");
  const std::size_t n = y.size();
  if (v.size() != n || metric.size() != n) throw InputError("omega_y_derivatives: dimension mismatch");

  const Vector yl = lower<double>(metric, y.components());
  const Vector bl = lower<double>(metric, v.components());
  const double s = bundle.s;
  const double a2 = alpha * alpha, a4 = a2 * a2;

  OmegaYDerivatives out;
  out.s_y.resize(n);
  out.s_yy = Matrix(n);
  for (std::size_t i = 0; i < n; ++i) out.s_y[i] = (alpha * bl[i] - s * yl[i]) / a2;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.s_yy(i, j) = (3.0 * s * yl[i] * yl[j] - (bl[i] * yl[j] + bl[j] * yl[i]) * alpha -
                        a2 * s * metric(i, j)) /
                       a4;

  const double f1 = printed::omega_first_factor(bundle.m, s, bundle.b2, bundle.n);
  const double f2 = printed::omega_second_factor(bundle.m, s, bundle.b2, bundle.n);

  out.chain_j.resize(n);
  out.printed_j.resize(n);
  out.chain_ij = Matrix(n);
  out.printed_ij = Matrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.chain_j[j] = bundle.omega_d1 * out.s_y[j];
    out.printed_j[j] = f1 * out.s_y[j];
    out.discrepancy_j = std::max(out.discrepancy_j, std::abs(out.printed_j[j] - out.chain_j[j]));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.chain_ij(i, j) =
          bundle.omega_d2 * out.s_y[i] * out.s_y[j] + bundle.omega_d1 * out.s_yy(i, j);
      // As printed, the second group keeps the trailing s_{y^j} of the first display.
      out.printed_ij(i, j) =
          f2 * out.s_y[j] * out.s_y[i] + f1 * out.s_y[j] * out.s_yy(i, j);
      out.discrepancy_ij =
          std::max(out.discrepancy_ij, std::abs(out.printed_ij(i, j) - out.chain_ij(i, j)));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Mean Berwald curvature

enum class MeanBerwaldSource { oracle, closed_form };

struct MeanBerwaldResult {
  Matrix E;
  MeanBerwaldSource source;
  std::optional<double> residual_vs_oracle;
  double asymmetry = 0.0;
  double step = 0.0;  // finite-difference step actually used (oracle only)
};

struct HessianOptions {
  double relative_step = 1e-4;  // h = relative_step * alpha(y)
  int max_halvings = 8;
  double cone_margin = 1e-6;  // stencil must keep |beta| >= cone_margin * alpha
  unsigned threads = 1;
};

namespace detail {

inline bool stencil_is_regular(const HomogeneousSpec& spec, const PhiModel& model,
                               std::span<const long double> y, long double h, double margin) {
  if (!model.is_singular()) return true;
  const auto centre = alpha_beta<long double>(spec, y);
  for (long double step : {h, h / 2}) {
    for (const auto& p : hessian_stencil_points<long double>(y, step)) {
      const auto ab = alpha_beta<long double>(spec, std::span<const long double>(p));
      if (fabsl(ab.beta) < static_cast<long double>(margin) * ab.alpha) return false;
      if ((ab.beta > 0) != (centre.beta > 0)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// E_ij = ½ ∂²S/∂y^i∂y^j of the generic S-curvature, by Richardson-extrapolated
/// central differences. S is evaluated in extended precision at the stencil
/// points so rounding stays well below the truncation error at h = 1e-4 |y|.
inline MeanBerwaldResult mean_berwald_oracle(const HomogeneousSpec& spec, const PhiModel& model,
                                             const TangentVector& y,
                                             const HessianOptions& opts = {}) {
  const auto ab = alpha_beta_s(spec, y);
  if (model.is_singular() && ab.beta == 0.0)
    throw SingularityError("mean Berwald: singular direction, beta(y) = 0");

  const std::vector<long double> yl(y.components().begin(), y.components().end());
  const std::span<const long double> ys(yl);

  long double h = static_cast<long double>(opts.relative_step * ab.alpha);
  int halvings = 0;
  while (!detail::stencil_is_regular(spec, model, ys, h, opts.cone_margin)) {
    if (++halvings > opts.max_halvings)
      throw StencilError("mean Berwald: stencil cannot avoid the beta = 0 cone");
    h /= 2;
  }

  const auto s_of = [&](std::span<const long double> p) {
    return s_curvature_generic_t<long double>(spec, model, p);
  };
  MeanBerwaldResult out{richardson_half_hessian<long double>(s_of, ys, h, opts.threads),
                        MeanBerwaldSource::oracle, std::nullopt, 0.0, static_cast<double>(h)};
  out.asymmetry = asymmetry(out.E);
  return out;
}

/// How to read the undefined coefficient "A" multiplying -delta_ij / alpha^3 in the
/// printed closed form.
enum class AReading {
  omega,                // A = Omega (what the derivation of that term produces)
  first_summand,        // A = Omega <[v,y], y> / alpha, the symbol's meaning in the proof
};

inline const char* to_string(AReading r) {
  return r == AReading::omega ? "A=Omega" : "A=Omega<[v,y],y>/alpha";
}

/// The six bracket-pairing groups of the printed closed form (each before the
/// overall factor ½), evaluated verbatim with the chain-rule Omega derivatives.
inline std::array<Matrix, 6> mean_berwald_closed_terms(const HomogeneousSpec& spec, double m,
                                                       const TangentVector& y,
                                                       AReading reading = AReading::omega) {
  const std::size_t n = spec.n();
  const auto ab = alpha_beta_s(spec, y);
  if (ab.beta == 0.0) throw SingularityError("mean Berwald: singular direction, beta(y) = 0");
  if (ab.beta < 0.0 && !is_integer_valued(m))
    throw DomainError("kropina: s^-m is not real for s < 0 and non-integer m");

  const Matrix& g = spec.metric();
  const TangentVector v(spec.v());
  const double alpha = ab.alpha, s = ab.s;
  const double a3 = alpha * alpha * alpha, a5 = a3 * alpha * alpha;

  const OmegaBundle bundle = omega_bundle(m, s, spec.b2(), static_cast<int>(n));
  const OmegaYDerivatives d = omega_y_derivatives(bundle, alpha, y, v, g);
  const double om = bundle.omega;
  const Vector& oj = d.chain_j;
  const Matrix& oij = d.chain_ij;
  const Vector& sy = d.s_y;
  const Matrix& syy = d.s_yy;

  const Vector yl = lower<double>(g, y.components());
  const auto pr = detail::bracket_pairings<double>(spec, y.components());
  const Vector w = bracket<double>(spec, spec.v(), y.components());
  const Vector wl = lower<double>(g, w);

  // ad[i] = [v, e_i]_m and its lowered form
  std::vector<Vector> ad(n), adl(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    ad[i] = bracket<double>(spec, spec.v(), e);
    adl[i] = lower<double>(g, ad[i]);
  }
  Vector p_i(n), r_i(n);  // d<[v,y],y>/dy^i and d<[v,y],v>/dy^i
  for (std::size_t i = 0; i < n; ++i) {
    p_i[i] = bilinear<double>(g, ad[i], y.components()) + wl[i];
    r_i[i] = bilinear<double>(g, ad[i], spec.v());
  }

  const double a_coef = reading == AReading::omega ? om : om * pr.with_y / alpha;
  const double c = m / (m + 1.0);

  std::array<Matrix, 6> groups;
  for (auto& mtx : groups) mtx = Matrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      groups[0](i, j) = (oij(i, j) / alpha - yl[i] / a3 * oj[j] - yl[j] / a3 * oj[i] -
                         a_coef / a3 * g(i, j) + 3.0 * om / a5 * yl[i] * yl[j]) *
                        pr.with_y;
      groups[1](i, j) = (oj[j] / alpha - om * yl[j] / a3) * p_i[i];
      groups[2](i, j) = (oj[i] / alpha - om * yl[i] / a3) * p_i[j];
      groups[3](i, j) = om / alpha * (adl[j][i] + adl[i][j]);
      groups[4](i, j) = (-c * oj[i] / (s * s) * sy[j] + 2.0 * c / (s * s * s) * om * sy[i] * sy[j] -
                         c / (s * s) * om * syy(j, i) + c / s * oij(j, i) -
                         c / (s * s) * sy[i] * oj[j]) *
                        pr.with_v;
      groups[5](i, j) = (-c * om / (s * s) * sy[j] + c / s * oj[j]) * r_i[i];
    }
  return groups;
}

/// Printed closed form of the mean Berwald curvature for phi = s^{-m}. The
/// result is returned as evaluated (not symmetrized) together with its
/// asymmetry and its distance to the finite-difference oracle.
inline MeanBerwaldResult mean_berwald_closed(const HomogeneousSpec& spec, double m,
                                             const TangentVector& y,
                                             AReading reading = AReading::omega,
                                             const HessianOptions& opts = {}) {
  const auto groups = mean_berwald_closed_terms(spec, m, y, reading);
  const std::size_t n = spec.n();
  Matrix e(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (const auto& grp : groups) acc += grp(i, j);
      e(i, j) = 0.5 * acc;
    }
  const MeanBerwaldResult oracle = mean_berwald_oracle(spec, PhiModel::kropina(m), y, opts);
  MeanBerwaldResult out{e, MeanBerwaldSource::closed_form, max_abs_difference(e, oracle.E), 0.0,
                        0.0};
  out.asymmetry = asymmetry(e);
  return out;
}

// ---------------------------------------------------------------------------
// Isotropy

struct IsotropyVerdict {
  bool zero;
  double max_abs_s;
  double scale;  // largest magnitude of the individual bracket terms seen
  std::size_t samples;

  std::string label() const { return zero ? "isotropic (hence zero)" : "nonzero"; }
};

/// For a homogeneous m-Kropina space, isotropic S-curvature is equivalent to S = 0.
/// S is sampled on pseudo-random regular directions and compared with
/// 1e-10 * max(1, scale).
inline IsotropyVerdict classify_isotropy(const HomogeneousSpec& spec, double m,
                                         std::size_t sample_count,
                                         std::uint64_t seed = default_seed) {
  if (sample_count == 0) throw InputError("isotropy: sample_count must be positive");
  DirectionSampling sampling;
  sampling.count = sample_count;
  sampling.seed = seed;
  sampling.positive_beta = !is_integer_valued(m);
  const auto dirs = sample_directions(spec, sampling);
  if (dirs.empty()) throw ClassificationError("isotropy: no regular directions (v degenerate?)");

  IsotropyVerdict verdict{true, 0.0, 0.0, dirs.size()};
  const double c = m / (m + 1.0);
  for (const auto& y : dirs) {
    const auto ab = alpha_beta_s(spec, y);
    const double S = s_curvature_kropina(spec, m, y);
    const OmegaBundle om = omega_bundle(m, ab.s, spec.b2(), static_cast<int>(spec.n()));
    const auto pr = detail::bracket_pairings<double>(spec, y.components());
    const double terms =
        std::abs(om.omega) * (std::abs(pr.with_y) / ab.alpha + std::abs(c / ab.s * pr.with_v));
    verdict.max_abs_s = std::max(verdict.max_abs_s, std::abs(S));
    verdict.scale = std::max(verdict.scale, terms);
  }
  verdict.zero = verdict.max_abs_s < 1e-10 * std::max(1.0, verdict.scale);
  return verdict;
}

}  // namespace finslerlab
