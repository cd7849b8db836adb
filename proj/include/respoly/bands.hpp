#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "respoly/errors.hpp"
#include "respoly/poly.hpp"
#include "respoly/potential.hpp"
#include "respoly/realset.hpp"
#include "respoly/solver.hpp"

namespace respoly {

/// The level set |R| <= r of a converged extremal polynomial: a union of
/// closed bands, one monotone branch of R covering [-r, r] per band, with
/// every band carrying harmonic measure 1 / effective_degree of the level
/// set. Junctions record points where two bands touch (a critical point
/// with critical value exactly on the level); the merged geometry keeps
/// them as interior points. Bands around a zero lying in a gap shrink
/// exponentially with the degree and routinely fall below the floating
/// point resolution at their location; such bands are reported by center in
/// `collapsed` instead of as intervals of `bands`. `split_band_count`
/// counts all branches: merged components split at junctions, plus the
/// collapsed bands, and always equals the effective degree.
struct BandSet {
  int n{0};
  int effective_degree{0};
  double norm{0.0};
  RealSet bands;
  std::vector<double> junctions;
  std::vector<double> collapsed;
  int split_band_count{0};
};

namespace detail {

/// All real zeros of a converged extremal solution, recovered from its
/// alternation certificate: consecutive reference points with opposite signs
/// of R bracket exactly one zero, and at most one further zero lies beyond
/// the outermost reference point on the side where the sign of R at the
/// reference disagrees with its sign at large |x|. Every zero is real, so
/// this enumeration is exhaustive and needs no grid search.
inline std::vector<double> extremal_zeros(const ResidualSolution& sol) {
  const Polynomial& R = sol.poly;
  const Polynomial dR = R.derivative();
  const int d = sol.effective_degree;
  const auto& pts = sol.reference.points;
  if (d < 1) return {};
  if (pts.size() < 2)
    throw InvalidInput("extremal_zeros: solution lacks a reference set");

  std::vector<double> zeros;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    const double fa = R(pts[j]), fb = R(pts[j + 1]);
    if ((fa > 0) != (fb > 0))
      zeros.push_back(polish_root(R, dR, pts[j], pts[j + 1], fa, fb));
  }

  // Tail zeros. The sign of R far out is set by the leading coefficient, and
  // beyond the outermost zero R is monotone, so a doubling search brackets
  // the crossing whenever the signs disagree.
  const double lead = R.coeffs()[static_cast<std::size_t>(R.degree())];
  const double diam = std::max(pts.back() - pts.front(), 1e-12);
  for (int side = 0; side < 2; ++side) {
    const double sign_far =
        (side == 0 && R.degree() % 2 != 0) ? -lead : lead;
    const double xr = side == 0 ? pts.front() : pts.back();
    const double fr = R(xr);
    if ((fr > 0) == (sign_far > 0)) continue;
    double step = 0.5 * diam;
    double x = xr, f = fr;
    for (int it = 0; it < 600 && (f > 0) == (fr > 0); ++it) {
      x += side == 0 ? -step : step;
      step *= 2.0;
      f = R(x);
    }
    if ((f > 0) == (fr > 0))
      throw NumericalFailure("extremal_zeros: tail zero does not close");
    zeros.push_back(side == 0 ? polish_root(R, dR, x, xr, f, fr)
                              : polish_root(R, dR, xr, x, fr, f));
  }

  std::sort(zeros.begin(), zeros.end());
  if (static_cast<int>(zeros.size()) != d)
    throw NumericalFailure(
        "extremal_zeros: zero count does not match the degree");
  return zeros;
}

/// The d - 1 critical points of R, one bracketed between each pair of
/// consecutive zeros.
inline std::vector<double> interlaced_critical_points(
    const Polynomial& R, const std::vector<double>& zeros) {
  const Polynomial dR = R.derivative();
  const Polynomial ddR = dR.derivative();
  std::vector<double> crit;
  for (std::size_t i = 0; i + 1 < zeros.size(); ++i) {
    const double fa = dR(zeros[i]), fb = dR(zeros[i + 1]);
    if ((fa > 0) == (fb > 0))
      throw NumericalFailure(
          "interlaced_critical_points: derivative sign did not flip");
    crit.push_back(polish_root(dR, ddR, zeros[i], zeros[i + 1], fa, fb));
  }
  return crit;
}

/// Window with |R| strictly above the level at both ends. Outside the
/// outermost zeros R is monotone, so doubling steps terminate.
inline std::pair<double, double> level_window(const Polynomial& R, double r,
                                              const std::vector<double>& zeros) {
  const double diam = std::max(zeros.back() - zeros.front(), 1e-12);
  double lo = zeros.front(), hi = zeros.back();
  double step = 0.1 * diam;
  for (int it = 0; it < 600 && std::abs(R(lo)) <= 1.2 * r; ++it) {
    lo -= step;
    step *= 2.0;
  }
  step = 0.1 * diam;
  for (int it = 0; it < 600 && std::abs(R(hi)) <= 1.2 * r; ++it) {
    hi += step;
    step *= 2.0;
  }
  if (std::abs(R(lo)) <= 1.2 * r || std::abs(R(hi)) <= 1.2 * r)
    throw NumericalFailure("level_window: level set does not close");
  return {lo, hi};
}

}  // namespace detail

/// Extracts the band set of a converged solution by slicing the polynomial at
/// the levels +r and -r along its monotone pieces.
inline BandSet band_set(const NormalizedProblem& prob,
                        const ResidualSolution& sol) {
  if (!sol.converged)
    throw InvalidInput("band_set: requires a converged solution");
  const Polynomial& R = sol.poly;
  const double r = sol.norm;
  const int d = sol.effective_degree;
  if (d < 1) throw InvalidInput("band_set: effective degree must be >= 1");

  const std::vector<double> zeros = detail::extremal_zeros(sol);
  const auto [wlo, whi] = detail::level_window(R, r, zeros);
  const Polynomial dR = R.derivative();
  const std::vector<double> crit = detail::interlaced_critical_points(R, zeros);

  const double touch_tol = 1e-8 * r;
  std::vector<double> junctions;
  for (double c : crit)
    if (std::abs(std::abs(R(c)) - r) <= touch_tol) junctions.push_back(c);
  auto is_junction = [&](double x) {
    for (double j : junctions)
      if (x == j) return true;
    return false;
  };

  std::vector<double> pieces;
  pieces.push_back(wlo);
  pieces.insert(pieces.end(), crit.begin(), crit.end());
  pieces.push_back(whi);

  std::vector<double> bounds = junctions;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const double a = pieces[i], b = pieces[i + 1];
    for (double level : {r, -r}) {
      const double fa = R(a) - level, fb = R(b) - level;
      // Crossings that coincide with a touching point are represented by the
      // junction itself.
      if ((is_junction(a) && std::abs(fa) <= touch_tol) ||
          (is_junction(b) && std::abs(fb) <= touch_tol))
        continue;
      if (fa * fb < 0.0) {
        std::vector<double> shifted = R.coeffs();
        shifted[0] -= level;
        const Polynomial f(R.basis(), std::move(shifted));
        bounds.push_back(detail::polish_root(f, dR, a, b, fa, fb));
      }
    }
  }
  std::sort(bounds.begin(), bounds.end());

  std::vector<double> walls;
  walls.push_back(wlo);
  walls.insert(walls.end(), bounds.begin(), bounds.end());
  walls.push_back(whi);
  std::vector<Interval> raw;
  for (std::size_t i = 0; i + 1 < walls.size(); ++i) {
    const double a = walls[i], b = walls[i + 1];
    if (!(a < b)) continue;
    const double mid = 0.5 * (a + b);
    if (std::abs(R(mid)) > r * (1.0 + 1e-9)) continue;
    // Bands below the floating point resolution at their location cannot be
    // carried as intervals; they are restored from the zero list below.
    if (b - a >= 1e-12 * std::max(1.0, std::abs(mid))) raw.push_back({a, b});
  }
  if (raw.empty()) throw NumericalFailure("band_set: empty level set");
  const double scale = raw.back().hi - raw.front().lo;

  BandSet bs;
  bs.n = sol.n;
  bs.effective_degree = d;
  bs.norm = r;
  bs.bands = validate_set(std::move(raw), 1e-9 * scale);
  bs.junctions = junctions;
  for (double z : zeros)
    if (!bs.bands.contains(z, 0.0)) bs.collapsed.push_back(z);
  int split =
      static_cast<int>(bs.bands.components() + bs.collapsed.size());
  for (double j : junctions)
    for (const Interval& band : bs.bands.intervals)
      if (j > band.lo && j < band.hi) ++split;
  bs.split_band_count = split;
  if (split != d)
    throw InvariantViolation(
        "band_set: branch count does not match the degree");

  if (bs.bands.contains(prob.x0, 0.0))
    throw InvariantViolation("band_set: bands contain the normalization point");
  for (const Interval& iv : prob.set.intervals)
    if (!(bs.bands.contains(iv.lo, 1e-9 * scale) &&
          bs.bands.contains(iv.hi, 1e-9 * scale)))
      throw InvariantViolation("band_set: bands do not cover the input set");
  return bs;
}

/// Green's function of the band set with pole at infinity, expressed through
/// the polynomial itself: (1/d) log of the modulus of the Joukowski lift of
/// R / r, taking the branch of modulus at least one.
inline double green_period(const ResidualSolution& sol, double x) {
  const double v = sol.poly(x) / sol.norm;
  if (std::abs(v) <= 1.0) return 0.0;
  const double av = std::abs(v);
  return std::log(av + std::sqrt(av * av - 1.0)) / sol.effective_degree;
}

inline double green_period(const ResidualSolution& sol,
                           std::complex<double> z) {
  const std::complex<double> v = sol.poly(z) / sol.norm;
  const std::complex<double> s = std::sqrt(v * v - 1.0);
  const double mod = std::max(std::abs(v + s), std::abs(v - s));
  if (mod <= 1.0) return 0.0;
  return std::log(mod) / sol.effective_degree;
}

/// Residual of the identity r = 1 / cosh(d g_n(x0)) tying the norm to the
/// band Green's function at the normalization point.
inline double norm_identity_defect(const NormalizedProblem& prob,
                                   const ResidualSolution& sol) {
  const double g = green_period(sol, prob.x0);
  return std::abs(sol.norm * std::cosh(sol.effective_degree * g) - 1.0);
}

/// Widom factor: the norm compensated by the Green's function of the input
/// set at the normalization point, W_n = r_n (e^{n g} + e^{-n g}).
inline double widom_factor(const ResidualSolution& sol, double g_at_x0) {
  return sol.norm * (std::exp(sol.n * g_at_x0) + std::exp(-sol.n * g_at_x0));
}

/// A zero of the extremal polynomial, located relative to the input set.
/// All zeros lie in the level set |R| <= r, which contains the input set, so
/// a zero can sit inside a band, in a bounded gap, or beyond the hull.
struct ZeroInfo {
  enum class Where { band, gap, unbounded };
  double x{0.0};
  Where where{Where::band};
  std::size_t index{0};  // band or gap index when applicable
};

inline std::vector<ZeroInfo> zero_report(const NormalizedProblem& prob,
                                         const ResidualSolution& sol) {
  if (!sol.converged)
    throw InvalidInput("zero_report: requires a converged solution");
  if (sol.effective_degree < 1) return {};
  const std::vector<double> roots = detail::extremal_zeros(sol);
  const double tol = 1e-11 * std::max(1.0, prob.set.diameter());
  std::vector<ZeroInfo> out;
  for (double z : roots) {
    ZeroInfo zi;
    zi.x = z;
    bool placed = false;
    for (std::size_t i = 0; i < prob.set.components() && !placed; ++i)
      if (z >= prob.set.intervals[i].lo - tol &&
          z <= prob.set.intervals[i].hi + tol) {
        zi.where = ZeroInfo::Where::band;
        zi.index = i;
        placed = true;
      }
    if (!placed) {
      for (std::size_t j = 0; j + 1 < prob.set.components() && !placed; ++j)
        if (z > prob.set.intervals[j].hi && z < prob.set.intervals[j + 1].lo) {
          zi.where = ZeroInfo::Where::gap;
          zi.index = j;
          placed = true;
        }
    }
    if (!placed) zi.where = ZeroInfo::Where::unbounded;
    out.push_back(zi);
  }
  return out;
}

/// Per-gap placement diagnostics of the zeros in the coordinates
/// y = 1/(x - x0), where each gap (other than the one holding x0) carries one
/// critical point of the pole-shifted Green's function. Distances to that
/// critical point versus to the gap edges show whether the Widom factor sits
/// near its lower or upper bound.
struct GapDiagnostic {
  bool unbounded{false};
  std::size_t gap_index{0};  // valid when !unbounded
  int zero_count{0};
  double crit_distance{std::numeric_limits<double>::quiet_NaN()};
  double edge_distance{std::numeric_limits<double>::quiet_NaN()};
};

inline std::vector<GapDiagnostic> saturation_diagnostics(
    const NormalizedProblem& prob, const ResidualSolution& sol,
    const PoleData& pd) {
  const auto zeros = zero_report(prob, sol);
  auto y_of = [&](double x) { return 1.0 / (x - prob.x0); };

  // Locate each critical point in the gap structure of the input set.
  const std::size_t m = prob.set.components();
  std::vector<double> crit_y_bounded(m, std::numeric_limits<double>::quiet_NaN());
  double crit_y_unbounded = std::numeric_limits<double>::quiet_NaN();
  for (const CriticalPoint& cp : pd.critical) {
    const double y = cp.at_infinity ? 0.0 : y_of(cp.location);
    if (cp.at_infinity || cp.location < prob.set.hull_lo() ||
        cp.location > prob.set.hull_hi()) {
      crit_y_unbounded = y;
      continue;
    }
    for (std::size_t j = 0; j + 1 < m; ++j)
      if (cp.location > prob.set.intervals[j].hi &&
          cp.location < prob.set.intervals[j + 1].lo) {
        crit_y_bounded[j] = y;
        break;
      }
  }

  std::vector<GapDiagnostic> out;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    GapDiagnostic d;
    d.gap_index = j;
    const double e1 = y_of(prob.set.intervals[j].hi);
    const double e2 = y_of(prob.set.intervals[j + 1].lo);
    for (const ZeroInfo& gz : zeros) {
      if (gz.where != ZeroInfo::Where::gap || gz.index != j) continue;
      ++d.zero_count;
      const double y = y_of(gz.x);
      if (!std::isnan(crit_y_bounded[j])) {
        const double dc = std::abs(y - crit_y_bounded[j]);
        if (std::isnan(d.crit_distance) || dc < d.crit_distance)
          d.crit_distance = dc;
      }
      const double de = std::min(std::abs(y - e1), std::abs(y - e2));
      if (std::isnan(d.edge_distance) || de < d.edge_distance)
        d.edge_distance = de;
    }
    out.push_back(d);
  }
  GapDiagnostic u;
  u.unbounded = true;
  const double e1 = y_of(prob.set.hull_lo());
  const double e2 = y_of(prob.set.hull_hi());
  for (const ZeroInfo& gz : zeros) {
    if (gz.where != ZeroInfo::Where::unbounded) continue;
    ++u.zero_count;
    const double y = y_of(gz.x);
    if (!std::isnan(crit_y_unbounded)) {
      const double dc = std::abs(y - crit_y_unbounded);
      if (std::isnan(u.crit_distance) || dc < u.crit_distance)
        u.crit_distance = dc;
    }
    const double de = std::min(std::abs(y - e1), std::abs(y - e2));
    if (std::isnan(u.edge_distance) || de < u.edge_distance)
      u.edge_distance = de;
  }
  out.push_back(u);
  return out;
}

}  // namespace respoly
