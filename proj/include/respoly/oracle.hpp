#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "respoly/errors.hpp"
#include "respoly/linalg.hpp"
#include "respoly/poly.hpp"
#include "respoly/realset.hpp"
#include "respoly/solver.hpp"

namespace respoly::oracle {

/// Discretized minimax problem: minimize the max of |p| over a fixed grid on
/// the set subject to p(x0) = 1. Solved as a linear program, independently of
/// the exchange machinery, to cross-check norms from below.
struct GridProblem {
  NormalizedProblem prob;
  int n{0};
  int points_per_band{2000};
  std::vector<double> grid;
  ChebBasis basis{0.0, 1.0};
};

/// Cosine-spaced grid with both endpoints on every band. Refining with
/// 2P - 1 points per band nests the previous grid.
inline GridProblem make_grid(const NormalizedProblem& prob, int n,
                             int points_per_band = 2000) {
  if (n < 0) throw InvalidInput("make_grid: n must be >= 0");
  if (points_per_band < 2)
    throw InvalidInput("make_grid: need at least 2 points per band");
  GridProblem gp;
  gp.prob = prob;
  gp.n = n;
  gp.points_per_band = points_per_band;
  gp.basis = ChebBasis{prob.set.hull_lo(), prob.set.hull_hi()};
  const double pi = std::numbers::pi;
  for (const Interval& band : prob.set.intervals)
    for (int j = 0; j < points_per_band; ++j)
      gp.grid.push_back(band.mid() -
                        band.halfwidth() *
                            std::cos(pi * j / (points_per_band - 1)));
  std::sort(gp.grid.begin(), gp.grid.end());
  return gp;
}

inline GridProblem refine(const GridProblem& gp) {
  return make_grid(gp.prob, gp.n, 2 * gp.points_per_band - 1);
}

/// A grid point active in the optimal basis, with its dual weight.
struct ActivePoint {
  double x{0.0};
  int sign{1};
  double weight{0.0};
};

struct OracleResult {
  double t{0.0};  // grid minimax value; a lower bound for the continuum norm
  Polynomial poly;
  std::vector<ActivePoint> active;
  int iterations{0};
};

/// Two-phase dense simplex on the dual program
///   max nu  s.t.  sum_g mu_g sigma_g phi_i(x_g) = nu phi_i(x0),
///                 sum_g mu_g = 1,  mu >= 0,
/// whose multipliers reproduce the primal coefficients and value.
inline OracleResult grid_minimax(const GridProblem& gp) {
  const int n = gp.n;
  const int m = n + 2;
  const std::vector<double>& grid = gp.grid;
  const std::size_t count = grid.size();
  if (static_cast<int>(count) < n + 1)
    throw InvalidInput("grid_minimax: grid must hold at least n + 1 points");

  std::vector<double> phi_grid(count * static_cast<std::size_t>(n + 1));
  for (std::size_t g = 0; g < count; ++g) {
    const std::vector<double> row = detail::basis_row(gp.basis, grid[g], n);
    std::copy(row.begin(), row.end(),
              phi_grid.begin() + g * static_cast<std::size_t>(n + 1));
  }
  const std::vector<double> phi0 =
      detail::basis_row(gp.basis, gp.prob.x0, n);

  // Columns: 0 holds nu, then two signed columns per grid point, then the
  // artificial identity block used by phase one.
  const std::size_t art0 = 1 + 2 * count;
  const std::size_t ncols = art0 + static_cast<std::size_t>(m);
  auto fill_column = [&](std::size_t j, std::vector<double>& col) {
    std::fill(col.begin(), col.end(), 0.0);
    if (j == 0) {
      for (int i = 0; i <= n; ++i) col[static_cast<std::size_t>(i)] = -phi0[i];
    } else if (j < art0) {
      const std::size_t g = (j - 1) / 2;
      const double sigma = ((j - 1) % 2 == 0) ? 1.0 : -1.0;
      for (int i = 0; i <= n; ++i)
        col[static_cast<std::size_t>(i)] =
            sigma * phi_grid[g * static_cast<std::size_t>(n + 1) + i];
      col[static_cast<std::size_t>(m - 1)] = 1.0;
    } else {
      col[j - art0] = 1.0;
    }
  };

  std::vector<std::size_t> basic(m);
  for (int i = 0; i < m; ++i) basic[i] = art0 + static_cast<std::size_t>(i);
  std::vector<double> b(m, 0.0);
  b[static_cast<std::size_t>(m - 1)] = 1.0;

  auto cost = [&](std::size_t j, bool phase1) -> double {
    if (phase1) return j >= art0 ? -1.0 : 0.0;
    return j == 0 ? 1.0 : 0.0;
  };

  std::vector<double> col(m), y(m), xb(m);
  int total_iters = 0;
  for (int phase = 1; phase <= 2; ++phase) {
    const bool p1 = (phase == 1);
    bool bland = false;
    int since_improve = 0;
    double last_obj = -std::numeric_limits<double>::infinity();
    for (;;) {
      if (++total_iters > 200000)
        throw NumericalFailure("grid_minimax: simplex iteration limit");

      std::vector<double> bmat(static_cast<std::size_t>(m) * m);
      std::vector<double> btmat(static_cast<std::size_t>(m) * m);
      for (int kb = 0; kb < m; ++kb) {
        fill_column(basic[static_cast<std::size_t>(kb)], col);
        for (int i = 0; i < m; ++i) {
          bmat[static_cast<std::size_t>(i) * m + kb] = col[i];
          btmat[static_cast<std::size_t>(kb) * m + i] = col[i];
        }
      }
      xb = detail::solve_dense(bmat, b);
      std::vector<double> cb(m);
      for (int i = 0; i < m; ++i)
        cb[static_cast<std::size_t>(i)] =
            cost(basic[static_cast<std::size_t>(i)], p1);
      y = detail::solve_dense(btmat, cb);

      double obj = 0.0;
      for (int i = 0; i < m; ++i) obj += cb[i] * xb[i];
      if (obj <= last_obj + 1e-14) {
        if (++since_improve > 50 * m) bland = true;  // anti-cycling fallback
      } else {
        since_improve = 0;
        last_obj = obj;
      }

      const double enter_tol = 1e-10;
      const std::size_t scan_end = p1 ? ncols : art0;
      std::size_t enter = ncols;
      double best_zeta = enter_tol;
      for (std::size_t j = 0; j < scan_end; ++j) {
        fill_column(j, col);
        double zeta = cost(j, p1);
        for (int i = 0; i < m; ++i) zeta -= y[i] * col[i];
        if (zeta > best_zeta) {
          best_zeta = zeta;
          enter = j;
          if (bland) break;  // first improving index
        }
      }
      if (enter == ncols) break;  // phase optimal

      fill_column(enter, col);
      const std::vector<double> d = detail::solve_dense(bmat, col);
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (d[i] <= 1e-11) continue;
        const double ratio = xb[i] / d[i];
        if (ratio < best_ratio - 1e-15 ||
            (ratio < best_ratio + 1e-15 &&
             (leave < 0 || basic[static_cast<std::size_t>(i)] <
                               basic[static_cast<std::size_t>(leave)]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0)
        throw NumericalFailure("grid_minimax: unbounded direction");
      basic[static_cast<std::size_t>(leave)] = enter;
    }
    if (p1) {
      double art_mass = 0.0;
      for (int i = 0; i < m; ++i)
        if (basic[static_cast<std::size_t>(i)] >= art0) art_mass += xb[i];
      if (std::abs(art_mass) > 1e-9)
        throw NumericalFailure("grid_minimax: phase one infeasible");
    }
  }

  OracleResult out;
  out.iterations = total_iters;
  out.t = y[static_cast<std::size_t>(m - 1)];
  std::vector<double> coef(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) coef[static_cast<std::size_t>(i)] = -y[i];
  out.poly = Polynomial(gp.basis, std::move(coef));
  for (int i = 0; i < m; ++i) {
    const std::size_t j = basic[static_cast<std::size_t>(i)];
    if (j == 0 || j >= art0) continue;
    ActivePoint ap;
    ap.x = grid[(j - 1) / 2];
    ap.sign = ((j - 1) % 2 == 0) ? 1 : -1;
    ap.weight = xb[i];
    out.active.push_back(ap);
  }
  std::sort(out.active.begin(), out.active.end(),
            [](const ActivePoint& a, const ActivePoint& b) { return a.x < b.x; });
  return out;
}

inline OracleResult minimax(const NormalizedProblem& prob, int n,
                            int points_per_band = 2000) {
  return grid_minimax(make_grid(prob, n, points_per_band));
}

}  // namespace respoly::oracle
