#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "finslerlab/errors.hpp"

namespace finslerlab {

using Vector = std::vector<double>;

/// Dense square matrix, row-major. Sizes here are tiny (dim of the coset space).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
  Matrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
    if (a_.size() != n_ * n_) throw InputError("matrix: expected n*n entries");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> row_major() const { return a_; }

  Matrix transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(i, j) = (*this)(j, i);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

inline double max_abs_difference(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double max_abs(const Matrix& a) { return max_abs_difference(a, Matrix(a.size())); }

inline double asymmetry(const Matrix& a) { return max_abs_difference(a, a.transposed()); }

/// Lower-triangular Cholesky factor, or nullopt when a pivot is <= tol.
inline std::optional<Matrix> cholesky(const Matrix& a, double pivot_tol = 1e-12) {
  const std::size_t n = a.size();
  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > pivot_tol)) return std::nullopt;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

/// Solve L^T x = b for lower-triangular L.
inline Vector solve_upper_transposed(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.size();
  Vector x(b.begin(), b.end());
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= l(k, ii) * x[k];
    x[ii] /= l(ii, ii);
  }
  return x;
}

/// x^T G y, generic in the scalar so stencils can run in extended precision.
template <class T>
T bilinear(const Matrix& g, std::span<const T> x, std::span<const T> y) {
  const std::size_t n = g.size();
  T acc = T(0);
  for (std::size_t i = 0; i < n; ++i) {
    T row = T(0);
    for (std::size_t j = 0; j < n; ++j) row += static_cast<T>(g(i, j)) * y[j];
    acc += x[i] * row;
  }
  return acc;
}

/// G y (index lowering).
template <class T>
std::vector<T> lower(const Matrix& g, std::span<const T> y) {
  const std::size_t n = g.size();
  std::vector<T> out(n, T(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += static_cast<T>(g(i, j)) * y[j];
  return out;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace finslerlab
