#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "finslerlab/linalg.hpp"

namespace finslerlab {

/// Points visited by the central second-difference stencil at step h:
/// y ± h e_i and y ± h e_i ± h e_j (i < j).
template <class T>
std::vector<std::vector<T>> hessian_stencil_points(std::span<const T> y, T h) {
  const std::size_t n = y.size();
  std::vector<std::vector<T>> pts;
  const auto shifted = [&](std::size_t i, T di, std::size_t j, T dj) {
    std::vector<T> p(y.begin(), y.end());
    p[i] += di;
    p[j] += dj;
    return p;
  };
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(shifted(i, h, i, T(0)));
    pts.push_back(shifted(i, -h, i, T(0)));
    for (std::size_t j = i + 1; j < n; ++j)
      for (T si : {T(1), T(-1)})
        for (T sj : {T(1), T(-1)}) pts.push_back(shifted(i, si * h, j, sj * h));
  }
  return pts;
}

/// Half-Hessian ½ ∂²f/∂y^i∂y^j by central differences at steps h and h/2,
/// combined with one Richardson step (error O(h^4)). Only i <= j is
/// computed and mirrored, so the result is exactly symmetric. Entries are
/// independent; `threads` > 1 spreads them over worker threads without
/// changing any result bit.
template <class T, class F>
Matrix richardson_half_hessian(const F& f, std::span<const T> y, T h, unsigned threads = 1) {
  const std::size_t n = y.size();
  const T f0 = f(std::span<const T>(y));

  const auto eval_at = [&](std::size_t i, T di, std::size_t j, T dj) {
    std::vector<T> p(y.begin(), y.end());
    p[i] += di;
    p[j] += dj;
    return f(std::span<const T>(p));
  };
  const auto second_difference = [&](std::size_t i, std::size_t j, T step) -> T {
    if (i == j) {
      const T fp = eval_at(i, step, i, T(0));
      const T fm = eval_at(i, -step, i, T(0));
      return (fp - T(2) * f0 + fm) / (step * step);
    }
    const T fpp = eval_at(i, step, j, step);
    const T fpm = eval_at(i, step, j, -step);
    const T fmp = eval_at(i, -step, j, step);
    const T fmm = eval_at(i, -step, j, -step);
    return ((fpp - fpm) - (fmp - fmm)) / (T(4) * step * step);
  };

  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) entries.emplace_back(i, j);
  std::vector<T> values(entries.size());

  const auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t e = first; e < entries.size(); e += stride) {
      const auto [i, j] = entries[e];
      const T coarse = second_difference(i, j, h);
      const T fine = second_difference(i, j, h / T(2));
      values[e] = (T(4) * fine - coarse) / T(3) / T(2);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, entries.size()));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          try {
            work(w, workers);
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
    }
    for (const auto& ep : failures)
      if (ep) std::rethrow_exception(ep);
  }

  Matrix out(n);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto [i, j] = entries[e];
    out(i, j) = out(j, i) = static_cast<double>(values[e]);
  }
  return out;
}

}  // namespace finslerlab
