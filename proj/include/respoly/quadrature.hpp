#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "respoly/errors.hpp"

namespace respoly::quad {

/// Result of an adaptive rule: value plus the node count actually spent.
struct Integral {
  double value{0.0};
  int nodes{0};
};

/// Midpoint rule on theta in [0, pi], doubled until two successive levels
/// agree. For integrands of the form F(cos theta) this is Gauss-Chebyshev
/// quadrature, so convergence is spectral for analytic F.
template <class F>
Integral theta_midpoint(F&& f, double rel_tol, double abs_floor,
                        int n0 = 256, int nmax = (1 << 18)) {
  const double pi = std::numbers::pi;
  double prev = 0.0;
  bool have_prev = false;
  for (int n = n0; n <= nmax; n *= 2) {
    double s = 0.0, s_abs = 0.0;
    const double h = pi / n;
    for (int j = 0; j < n; ++j) {
      const double v = f((j + 0.5) * h);
      s += v;
      s_abs += std::abs(v);
    }
    s *= h;
    s_abs *= h;
    // The L1 mass sets the noise floor for integrands that cancel.
    if (have_prev && std::abs(s - prev) <=
                         std::max(abs_floor,
                                  rel_tol * std::max(std::abs(s), s_abs)))
      return {s, n};
    prev = s;
    have_prev = true;
  }
  throw NumericalFailure("theta_midpoint: no convergence within node budget");
}

namespace detail {

struct GaussRule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

/// 32-point Gauss-Legendre rule, built once by Newton iteration on P_32.
inline const GaussRule& gl32() {
  static const GaussRule rule = [] {
    constexpr int n = 32;
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double pi = std::numbers::pi;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[i] = -x;
      r.x[n - 1 - i] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      r.w[i] = w;
      r.w[n - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

template <class F>
double gl32_panel(F&& f, double a, double b) {
  const GaussRule& r = gl32();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

template <class F>
double gl_adaptive_rec(F&& f, double a, double b, double whole, double tol,
                       int depth, int& nodes, double& defect) {
  const double m = 0.5 * (a + b);
  const double left = gl32_panel(f, a, m);
  const double right = gl32_panel(f, m, b);
  nodes += 64;
  const double delta = left + right - whole;
  // A refinement signal at the rounding noise of the panel values cannot be
  // improved in double precision; accept such panels and book the residual,
  // which the caller checks against the overall budget.
  const double noise = 256.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(left) + std::abs(right));
  if (std::abs(delta) <= std::max(tol, noise) || depth >= 48) {
    defect += std::abs(delta);
    return left + right;
  }
  return gl_adaptive_rec(f, a, m, left, 0.5 * tol, depth + 1, nodes, defect) +
         gl_adaptive_rec(f, m, b, right, 0.5 * tol, depth + 1, nodes, defect);
}

}  // namespace detail

/// Adaptive panel integration of a smooth integrand on [a, b] with
/// 32-point Gauss-Legendre panels and bisection refinement. Panels stuck at
/// the double precision noise floor are accepted; the run fails only if the
/// accumulated defect of accepted panels becomes material next to the result.
template <class F>
Integral gauss_adaptive(F&& f, double a, double b, double rel_tol,
                        double abs_floor) {
  if (a == b) return {0.0, 0};
  int nodes = 64;
  const double whole = detail::gl32_panel(f, a, b);
  const double mass =
      detail::gl32_panel([&](double x) { return std::abs(f(x)); }, a, b);
  const double tol = std::max(
      abs_floor, rel_tol * std::max(std::abs(whole), std::abs(mass)));
  double defect = 0.0;
  const double v =
      detail::gl_adaptive_rec(f, a, b, whole, tol, 0, nodes, defect);
  const double budget =
      std::max(1e-9 * std::max(std::abs(v), std::abs(mass)), 1000.0 * tol);
  if (defect > budget)
    throw NumericalFailure("gauss_adaptive: panel recursion exhausted");
  return {v, nodes};
}

}  // namespace respoly::quad
