#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace finslerlab {

/// Truncated univariate Taylor jet of order N.
///
/// Internally the jet stores normalized Taylor coefficients
/// c[k] = f^(k)(s0) / k!, so products are plain truncated convolutions and
/// quotients/powers follow the usual recurrences. Derivatives are exposed
/// through derivative(k) (and val/d1/d2 for the order-2 case used
/// throughout the metric-family code).
///
/// T is the underlying scalar; double for everything user-facing,
/// long double where finite-difference stencils need the extra digits.
template <int N, class T = double>
class Jet {
  static_assert(N >= 0, "jet order must be non-negative");

 public:
  using scalar_type = T;
  static constexpr int order = N;

  constexpr Jet() = default;
  constexpr Jet(T constant) { c_[0] = constant; }  // NOLINT: implicit lift of constants

  static constexpr Jet constant(T x) { return Jet(x); }

  /// The independent variable seeded at x: (x, 1, 0, ...).
  static constexpr Jet variable(T x) {
    Jet j(x);
    if constexpr (N >= 1) j.c_[1] = T(1);
    return j;
  }

  /// Build from derivative values f, f', f'', ...
  static constexpr Jet from_derivatives(const std::array<T, N + 1>& d) {
    Jet j;
    T fact = T(1);
    for (int k = 0; k <= N; ++k) {
      if (k > 0) fact *= T(k);
      j.c_[k] = d[k] / fact;
    }
    return j;
  }

  static constexpr Jet from_coefficients(const std::array<T, N + 1>& c) {
    Jet j;
    j.c_ = c;
    return j;
  }

  constexpr T coefficient(int k) const { return c_[k]; }
  constexpr const std::array<T, N + 1>& coefficients() const { return c_; }

  constexpr T derivative(int k) const {
    T fact = T(1);
    for (int i = 2; i <= k; ++i) fact *= T(i);
    return c_[k] * fact;
  }

  constexpr T val() const { return c_[0]; }
  constexpr T d1() const requires(N >= 1) { return c_[1]; }
  constexpr T d2() const requires(N >= 2) { return T(2) * c_[2]; }

  /// Jet of the derivative, one order lower: (f', f'', ...).
  constexpr Jet<N - 1, T> differentiated() const requires(N >= 1) {
    std::array<T, N> c{};
    for (int k = 0; k < N; ++k) c[k] = T(k + 1) * c_[k + 1];
    return Jet<N - 1, T>::from_coefficients(c);
  }

  template <int M>
  constexpr Jet<M, T> truncated() const requires(M <= N) {
    std::array<T, M + 1> c{};
    for (int k = 0; k <= M; ++k) c[k] = c_[k];
    return Jet<M, T>::from_coefficients(c);
  }

  constexpr Jet operator-() const {
    Jet r;
    for (int k = 0; k <= N; ++k) r.c_[k] = -c_[k];
    return r;
  }

  constexpr Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c_[k] += o.c_[k];
    return *this;
  }
  constexpr Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  constexpr Jet& operator*=(const Jet& o) {
    std::array<T, N + 1> r{};
    for (int k = 0; k <= N; ++k)
      for (int j = 0; j <= k; ++j) r[k] += c_[j] * o.c_[k - j];
    c_ = r;
    return *this;
  }
  constexpr Jet& operator/=(const Jet& o) {
    // h = f/g  =>  h_k = (f_k - sum_{j>=1} g_j h_{k-j}) / g_0
    std::array<T, N + 1> h{};
    for (int k = 0; k <= N; ++k) {
      T acc = c_[k];
      for (int j = 1; j <= k; ++j) acc -= o.c_[j] * h[k - j];
      h[k] = acc / o.c_[0];
    }
    c_ = h;
    return *this;
  }

  friend constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend constexpr Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend constexpr Jet operator/(Jet a, const Jet& b) { return a /= b; }

  friend std::ostream& operator<<(std::ostream& os, const Jet& j) {
    os << '(';
    for (int k = 0; k <= N; ++k) os << (k ? ", " : "") << j.derivative(k);
    return os << ')';
  }

 private:
  std::array<T, N + 1> c_{};
};

/// (f, f', f'') carrier used by the metric-family code.
using Jet2 = Jet<2, double>;

/// g^a for real a. Requires g.val() != 0; for non-integer a the caller is
/// responsible for g.val() > 0.
template <int N, class T>
constexpr Jet<N, T> pow(const Jet<N, T>& g, double a) {
  // g u' = a g' u  =>  k g_0 u_k = sum_{j=1..k} (a j - (k - j)) g_j u_{k-j}
  std::array<T, N + 1> u{};
  const T g0 = g.coefficient(0);
  using std::pow;
  u[0] = pow(g0, static_cast<T>(a));
  for (int k = 1; k <= N; ++k) {
    T acc = T(0);
    for (int j = 1; j <= k; ++j)
      acc += (static_cast<T>(a) * T(j) - T(k - j)) * g.coefficient(j) * u[k - j];
    u[k] = acc / (T(k) * g0);
  }
  return Jet<N, T>::from_coefficients(u);
}

template <int N, class T>
constexpr Jet<N, T> sqrt(const Jet<N, T>& g) {
  return pow(g, 0.5);
}

}  // namespace finslerlab
