#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "respoly/errors.hpp"

namespace respoly::detail {

/// Solves the dense n x n system A x = b by LU with partial pivoting.
/// `a` is row-major and consumed in place. Throws NumericalFailure when a
/// pivot falls below `pivot_tol` times the largest entry of its column.
inline std::vector<double> solve_dense(std::vector<double> a,
                                       std::vector<double> b,
                                       double pivot_tol = 1e-14) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw InvalidInput("solve_dense: shape mismatch");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw NumericalFailure("solve_dense: zero matrix");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a[perm[col] * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a[perm[r] * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= pivot_tol * scale)
      throw NumericalFailure("solve_dense: singular system");
    std::swap(perm[col], perm[piv]);
    const double d = a[perm[col] * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[perm[r] * n + col] / d;
      if (f == 0.0) continue;
      a[perm[r] * n + col] = 0.0;
      for (std::size_t c = col + 1; c < n; ++c)
        a[perm[r] * n + c] -= f * a[perm[col] * n + c];
      b[perm[r]] -= f * b[perm[col]];
    }
  }

  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[perm[i]];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[perm[i] * n + c] * x[c];
    x[i] = s / a[perm[i] * n + i];
  }
  return x;
}

}  // namespace respoly::detail
