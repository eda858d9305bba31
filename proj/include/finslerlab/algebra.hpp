#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "finslerlab/errors.hpp"
#include "finslerlab/linalg.hpp"

namespace finslerlab {

/// A tangent direction at the origin of G/H, in the basis of m.
class TangentVector {
 public:
  TangentVector() = default;
  explicit TangentVector(Vector y) : y_(std::move(y)) {}
  TangentVector(std::initializer_list<double> y) : y_(y) {}

  std::size_t size() const { return y_.size(); }
  double operator[](std::size_t i) const { return y_[i]; }
  std::span<const double> components() const { return y_; }

  TangentVector scaled(double lambda) const {
    Vector out = y_;
    for (double& x : out) x *= lambda;
    return TangentVector(std::move(out));
  }

  bool is_zero() const {
    for (double x : y_)
      if (x != 0.0) return false;
    return true;
  }

  friend bool operator==(const TangentVector&, const TangentVector&) = default;

 private:
  Vector y_;
};

/// One structure constant of the projected bracket, [e_i, e_j]_m ∋ coef * e_k.
/// Indices are 0-based here; the file format is 1-based.
struct BracketEntry {
  std::size_t i, j, k;
  double coef;
};

/// Reduced data of a homogeneous (alpha, beta) space at the origin:
/// inner product on m, the projected bracket [., .]_m, and the vector v dual to beta.
///
/// Construction only checks shapes. Positive definiteness, antisymmetry and
/// the b < 1 bound are reported by validate_spec().
class HomogeneousSpec {
 public:
  HomogeneousSpec(std::size_t n, Matrix metric, std::vector<double> structure, Vector v)
      : n_(n), metric_(std::move(metric)), c_(std::move(structure)), v_(std::move(v)) {
    if (n_ == 0) throw InputError("spec: dimension must be positive");
    if (metric_.size() != n_) throw InputError("spec: metric is not n x n");
    if (c_.size() != n_ * n_ * n_) throw InputError("spec: bracket table is not n x n x n");
    if (v_.size() != n_) throw InputError("spec: v does not have n components");
  }

  /// Dense table from the i<j entries; the (j, i) half is filled with the negated coefficient.
  static HomogeneousSpec from_entries(std::size_t n, Matrix metric,
                                      std::span<const BracketEntry> entries, Vector v) {
    std::vector<double> c(n * n * n, 0.0);
    for (const auto& e : entries) {
      if (e.i >= n || e.j >= n || e.k >= n) throw InputError("spec: bracket index out of range");
      if (e.i >= e.j) throw InputError("spec: bracket entries must have i < j");
      c[(e.i * n + e.j) * n + e.k] += e.coef;
      c[(e.j * n + e.i) * n + e.k] -= e.coef;
    }
    return HomogeneousSpec(n, std::move(metric), std::move(c), std::move(v));
  }

  std::size_t n() const { return n_; }
  const Matrix& metric() const { return metric_; }
  const Vector& v() const { return v_; }

  /// c[i][j][k]: coefficient of e_k in [e_i, e_j]_m.
  double structure(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * n_ + j) * n_ + k];
  }
  std::span<const double> structure_table() const { return c_; }

  double b2() const { return bilinear<double>(metric_, v_, v_); }
  double b() const { return std::sqrt(b2()); }

  bool is_abelian() const {
    for (double x : c_)
      if (x != 0.0) return false;
    return true;
  }

 private:
  std::size_t n_;
  Matrix metric_;
  std::vector<double> c_;
  Vector v_;
};

struct ValidationCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  /// Detail of the first failing check, empty when everything passed.
  std::string first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return c.detail;
    return {};
  }
};

inline ValidationReport validate_spec(const HomogeneousSpec& spec) {
  ValidationReport report;
  const std::size_t n = spec.n();
  const Matrix& g = spec.metric();

  {
    ValidationCheck c{"metric symmetric", true, ""};
    for (std::size_t i = 0; i < n && c.passed; ++i)
      for (std::size_t j = i + 1; j < n && c.passed; ++j)
        if (g(i, j) != g(j, i)) {
          std::ostringstream os;
          os << "metric not symmetric at (" << i + 1 << "," << j + 1 << ")";
          c = {c.name, false, os.str()};
        }
    report.checks.push_back(c);
  }
  {
    const bool spd = cholesky(g, 1e-12).has_value();
    report.checks.push_back(
        {"metric positive definite", spd, spd ? "" : "metric not positive definite"});
  }
  {
    ValidationCheck c{"bracket antisymmetric", true, ""};
    for (std::size_t i = 0; i < n && c.passed; ++i)
      for (std::size_t j = i; j < n && c.passed; ++j)
        for (std::size_t k = 0; k < n && c.passed; ++k)
          if (spec.structure(i, j, k) != -spec.structure(j, i, k)) {
            std::ostringstream os;
            os << "bracket not antisymmetric at c[" << i + 1 << "][" << j + 1 << "][" << k + 1
               << "]";
            c = {c.name, false, os.str()};
          }
    report.checks.push_back(c);
  }
  {
    const double b2 = spec.b2();
    ValidationCheck c{"0 < b < 1", true, ""};
    if (!(b2 > 0.0)) {
      c = {c.name, false, "b = 0 (v is the zero vector)"};
    } else if (!(b2 < 1.0)) {
      std::ostringstream os;
      os.precision(9);
      os << "b >= 1 (b = " << std::sqrt(b2) << ")";
      c = {c.name, false, os.str()};
    }
    report.checks.push_back(c);
  }
  return report;
}

namespace detail {

inline void require_dim(const HomogeneousSpec& spec, std::size_t got, const char* what) {
  if (got != spec.n()) {
    std::ostringstream os;
    os << what << ": expected " << spec.n() << " components, got " << got;
    throw InputError(os.str());
  }
}

}  // namespace detail

/// [x, y]_m = sum_{i,j} x^i y^j c[i][j][.]
template <class T>
std::vector<T> bracket(const HomogeneousSpec& spec, std::span<const T> x, std::span<const T> y) {
  const std::size_t n = spec.n();
  std::vector<T> out(n, T(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == T(0)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const T xy = x[i] * y[j];
      for (std::size_t k = 0; k < n; ++k) out[k] += xy * static_cast<T>(spec.structure(i, j, k));
    }
  }
  return out;
}

inline TangentVector bracket_m(const HomogeneousSpec& spec, const TangentVector& x,
                               const TangentVector& y) {
  detail::require_dim(spec, x.size(), "bracket_m");
  detail::require_dim(spec, y.size(), "bracket_m");
  return TangentVector(bracket<double>(spec, x.components(), y.components()));
}

template <class T>
struct AlphaBeta {
  T alpha;
  T beta;
  T s;
};

template <class T>
AlphaBeta<T> alpha_beta(const HomogeneousSpec& spec, std::span<const T> y) {
  std::vector<T> v(spec.v().begin(), spec.v().end());
  using std::sqrt;
  const T alpha = sqrt(bilinear<T>(spec.metric(), y, y));
  const T beta = bilinear<T>(spec.metric(), std::span<const T>(v), y);
  return {alpha, beta, beta / alpha};
}

/// alpha = |y|, beta = <v, y>, s = beta / alpha. y must be nonzero.
inline AlphaBeta<double> alpha_beta_s(const HomogeneousSpec& spec, const TangentVector& y) {
  detail::require_dim(spec, y.size(), "alpha_beta_s");
  if (y.is_zero()) throw InputError("alpha_beta_s: zero tangent vector");
  return alpha_beta<double>(spec, y.components());
}

}  // namespace finslerlab
