#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "respoly/errors.hpp"
#include "respoly/linalg.hpp"
#include "respoly/quadrature.hpp"
#include "respoly/realset.hpp"

namespace respoly {

/// Equilibrium description of a finite union of closed intervals: the density
/// |q(t)| / (pi sqrt|w(t)|) with w the monic edge polynomial and q the monic
/// polynomial of degree m - 1 determined by vanishing gap integrals, plus the
/// derived quantities (capacity, band masses, centered moments).
struct GreenData {
  RealSet set;
  std::vector<double> edges;        // 2m sorted endpoints
  double center{0.0};               // expansion center for q and the moments
  std::vector<double> qcoef;        // monic coefficients of q in powers of (t - center)
  std::vector<double> q_roots;      // one root per bounded gap
  std::vector<double> band_measure; // equilibrium mass per band (sums to 1)
  std::vector<double> moments;      // nu_k = int (t-center)^k dmu, k = 1..K
  double log_capacity{0.0};
  double capacity{0.0};
};

namespace detail {

/// sqrt of |prod (t - e)| over all edges except the two skipped indices.
/// Falls back to log-space accumulation for many factors to avoid overflow.
inline double sqrt_abs_w_rest(const std::vector<double>& edges, double t,
                              std::size_t skip1, std::size_t skip2) {
  if (edges.size() <= 48) {
    double prod = 1.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i == skip1 || i == skip2) continue;
      prod *= std::abs(t - edges[i]);
    }
    return std::sqrt(prod);
  }
  double logsum = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i == skip1 || i == skip2) continue;
    logsum += std::log(std::abs(t - edges[i]));
  }
  return std::exp(0.5 * logsum);
}

inline double eval_shifted(const std::vector<double>& coef, double center,
                           double t) {
  const double u = t - center;
  double acc = 0.0;
  for (std::size_t i = coef.size(); i-- > 0;) acc = acc * u + coef[i];
  return acc;
}

/// sqrt of prod |base_i + s| for precomputed edge offsets base_i. Keeping the
/// offsets relative to the launch point preserves the accuracy of factors
/// whose magnitude is far below the absolute coordinate (a band can be many
/// orders of magnitude narrower than its location). Log-space accumulation
/// guards against overflow for many factors.
inline double sqrt_shifted_prod(const std::vector<double>& base, double s) {
  if (base.size() <= 48) {
    double prod = 1.0;
    for (double b : base) prod *= std::abs(b + s);
    return std::sqrt(prod);
  }
  double logsum = 0.0;
  for (double b : base) logsum += std::log(std::abs(b + s));
  return std::exp(0.5 * logsum);
}

/// Root of f in [a, b] by bisection, bracketing by interior scan if the
/// endpoint signs agree.
template <typename F>
inline double bisect_root(F&& f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) {
    bool found = false;
    for (int i = 1; i < 256 && !found; ++i) {
      const double x = a + (b - a) * i / 256.0;
      const double fx = f(x);
      if (fa * fx <= 0.0) {
        b = x;
        fb = fx;
        found = true;
      }
    }
    if (!found)
      throw NumericalFailure("bisect_root: no sign change in bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Builds the equilibrium data of the set. The vanishing of each bounded gap
/// integral of q / sqrt|w| fixes q; the capacity comes from matching the
/// large-argument expansion of the potential at a far field point.
inline GreenData equilibrium(const RealSet& set) {
  GreenData gd;
  gd.set = set;
  const std::size_t m = set.components();
  for (const Interval& iv : set.intervals) {
    gd.edges.push_back(iv.lo);
    gd.edges.push_back(iv.hi);
  }
  const double c = 0.5 * (set.hull_lo() + set.hull_hi());
  const double radius = 0.5 * set.diameter();
  gd.center = c;

  // Monic q of degree m - 1 from the m - 1 gap conditions, in powers of
  // (t - c). The system is assembled and solved in the scaled variable
  // (t - c) / radius, which keeps the columns balanced for many bands; rows
  // are normalized to unit max to keep tiny gaps well scaled.
  if (m == 1) {
    gd.qcoef = {1.0};
  } else {
    const std::size_t dim = m - 1;
    std::vector<double> a(dim * dim, 0.0), rhs(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      const double glo = set.intervals[j].hi;
      const double ghi = set.intervals[j + 1].lo;
      const double mid = 0.5 * (glo + ghi);
      const double hw = 0.5 * (ghi - glo);
      const std::size_t s1 = 2 * j + 1, s2 = 2 * j + 2;
      for (std::size_t p = 0; p <= dim; ++p) {
        const auto integrand = [&](double th) {
          const double t = mid + hw * std::cos(th);
          return std::pow((t - c) / radius, static_cast<double>(p)) /
                 detail::sqrt_abs_w_rest(gd.edges, t, s1, s2);
        };
        const double val =
            quad::theta_midpoint(integrand, 1e-13, 1e-300).value;
        if (p < dim)
          a[j * dim + p] = val;
        else
          rhs[j] = -val;
      }
      double rowmax = std::abs(rhs[j]);
      for (std::size_t p = 0; p < dim; ++p)
        rowmax = std::max(rowmax, std::abs(a[j * dim + p]));
      if (rowmax > 0.0) {
        for (std::size_t p = 0; p < dim; ++p) a[j * dim + p] /= rowmax;
        rhs[j] /= rowmax;
      }
    }
    gd.qcoef = detail::solve_dense(std::move(a), std::move(rhs));
    // Undo the scaling: the coefficient of (t - c)^p is b_p radius^(dim - p).
    double fac = radius;
    for (std::size_t p = dim; p-- > 0;) {
      gd.qcoef[p] *= fac;
      fac *= radius;
    }
    gd.qcoef.push_back(1.0);
  }

  // One root of q per bounded gap.
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double glo = set.intervals[j].hi;
    const double ghi = set.intervals[j + 1].lo;
    gd.q_roots.push_back(detail::bisect_root(
        [&](double t) { return detail::eval_shifted(gd.qcoef, c, t); }, glo,
        ghi));
  }

  // Band masses and centered moments of the equilibrium measure.
  const double pi = std::numbers::pi;
  const int kmax = 32;
  std::vector<double> nu(kmax + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Interval& band = set.intervals[i];
    const double mid = band.mid(), hw = band.halfwidth();
    const std::size_t s1 = 2 * i, s2 = 2 * i + 1;
    const auto density = [&](double t) {
      return std::abs(detail::eval_shifted(gd.qcoef, c, t)) /
             detail::sqrt_abs_w_rest(gd.edges, t, s1, s2);
    };
    gd.band_measure.push_back(
        quad::theta_midpoint([&](double th) { return density(mid + hw * std::cos(th)); },
                       1e-13, 1e-300)
            .value /
        pi);
    for (int k = 1; k <= kmax; ++k) {
      const auto f = [&](double th) {
        const double t = mid + hw * std::cos(th);
        return std::pow(t - c, static_cast<double>(k)) * density(t);
      };
      nu[k] += quad::theta_midpoint(f, 1e-12, 1e-300).value / pi;
    }
  }
  gd.moments.assign(nu.begin() + 1, nu.end());

  // Capacity: evaluate the Green's function at a far field point by the line
  // integral from the outermost edge, then match the potential expansion
  // log|z - c| - sum nu_k / (k (z - c)^k) - g(z) = log C.
  const double zstar = c + 21.0 * std::max(radius, 1e-30);
  const double b_last = gd.edges.back();
  std::vector<double> base(gd.edges.size() - 1);
  for (std::size_t i = 0; i + 1 < gd.edges.size(); ++i)
    base[i] = b_last - gd.edges[i];
  const double u0 = b_last - c;
  const auto gl_integrand = [&](double xi) {
    const double s = xi * xi;
    return 2.0 * detail::eval_shifted(gd.qcoef, 0.0, u0 + s) /
           detail::sqrt_shifted_prod(base, s);
  };
  const double g_star =
      quad::gauss_adaptive(gl_integrand, 0.0, std::sqrt(zstar - b_last), 1e-13,
                     1e-300)
          .value;
  double tail = 0.0;
  double wpow = zstar - c;
  for (int k = 1; k <= kmax; ++k) {
    tail += gd.moments[k - 1] / (k * wpow);
    wpow *= (zstar - c);
  }
  gd.log_capacity = std::log(zstar - c) - tail - g_star;
  gd.capacity = std::exp(gd.log_capacity);
  return gd;
}

/// Green's function with pole at infinity, evaluated on the real line. Points
/// of the set map to 0; elsewhere the value is the line integral of the
/// density from the nearest band edge, with the endpoint singularity absorbed
/// by a square root substitution.
inline double green(const GreenData& gd, double x) {
  if (!std::isfinite(x)) throw InvalidInput("green: x must be finite");
  const double scale = std::max(1.0, std::abs(x));
  if (gd.set.contains(x, 1e-13 * scale)) return 0.0;

  std::size_t edge_idx = 0;
  double edge = gd.edges.front();
  if (x > gd.set.hull_hi()) {
    edge_idx = gd.edges.size() - 1;
    edge = gd.edges.back();
  } else if (x < gd.set.hull_lo()) {
    edge_idx = 0;
    edge = gd.edges.front();
  } else {
    bool located = false;
    for (std::size_t j = 0; j + 1 < gd.set.components(); ++j) {
      const double glo = gd.set.intervals[j].hi;
      const double ghi = gd.set.intervals[j + 1].lo;
      if (x > glo && x < ghi) {
        if (x - glo <= ghi - x) {
          edge_idx = 2 * j + 1;
          edge = glo;
        } else {
          edge_idx = 2 * j + 2;
          edge = ghi;
        }
        located = true;
        break;
      }
    }
    if (!located) return 0.0;  // within rounding of a band edge
  }

  const double span = std::sqrt(std::abs(x - edge));
  const double sgn = (x >= edge) ? 1.0 : -1.0;
  std::vector<double> base;
  base.reserve(gd.edges.size() - 1);
  for (std::size_t i = 0; i < gd.edges.size(); ++i)
    if (i != edge_idx) base.push_back(sgn * (edge - gd.edges[i]));
  const double u0 = edge - gd.center;
  const auto integrand = [&](double xi) {
    const double s = xi * xi;
    return 2.0 * detail::eval_shifted(gd.qcoef, 0.0, u0 + sgn * s) /
           detail::sqrt_shifted_prod(base, s);
  };
  const double val = quad::gauss_adaptive(integrand, 0.0, span, 1e-13, 1e-300).value;
  return std::abs(val);
}

/// Green's function at a complex point: the far field uses the moment
/// expansion of the potential, the near field direct quadrature of
/// int log|z - t| dmu(t) - log C. Real arguments route to the line path.
inline double green(const GreenData& gd, std::complex<double> z) {
  const double scale = std::max(1.0, std::abs(z));
  if (std::abs(z.imag()) <= 1e-13 * scale) return green(gd, z.real());

  const std::complex<double> w = z - gd.center;
  const double radius = 0.5 * gd.set.diameter();
  if (std::abs(w) > 3.0 * radius) {
    std::complex<double> inv = 1.0 / w, p = inv;
    std::complex<double> acc = 0.0;
    for (std::size_t k = 1; k <= gd.moments.size(); ++k) {
      acc += gd.moments[k - 1] * p / static_cast<double>(k);
      p *= inv;
    }
    return std::log(std::abs(w)) - gd.log_capacity - acc.real();
  }

  const double pi = std::numbers::pi;
  double pot = 0.0;
  for (std::size_t i = 0; i < gd.set.components(); ++i) {
    const Interval& band = gd.set.intervals[i];
    const double mid = band.mid(), hw = band.halfwidth();
    const auto f = [&](double th) {
      const double t = mid + hw * std::cos(th);
      return std::log(std::abs(z - t)) *
             std::abs(detail::eval_shifted(gd.qcoef, gd.center, t)) /
             detail::sqrt_abs_w_rest(gd.edges, t, 2 * i, 2 * i + 1);
    };
    pot += quad::theta_midpoint(f, 1e-13, 1e-300).value / pi;
  }
  return pot - gd.log_capacity;
}

/// Equilibrium mass of [a, b] intersected with the set. Whole bands reuse the
/// precomputed masses; partial overlaps integrate the density over the
/// corresponding arc of the cosine chart.
inline double harmonic_measure(const GreenData& gd, double a, double b) {
  if (!(a <= b)) throw InvalidInput("harmonic_measure: need a <= b");
  const double pi = std::numbers::pi;
  double mass = 0.0;
  for (std::size_t i = 0; i < gd.set.components(); ++i) {
    const Interval& band = gd.set.intervals[i];
    const double lo = std::max(a, band.lo);
    const double hi = std::min(b, band.hi);
    if (hi <= lo) continue;
    if (lo == band.lo && hi == band.hi) {
      mass += gd.band_measure[i];
      continue;
    }
    const double mid = band.mid(), hw = band.halfwidth();
    auto theta_of = [&](double t) {
      return std::acos(std::clamp((t - mid) / hw, -1.0, 1.0));
    };
    const double th_lo = theta_of(hi);
    const double th_hi = theta_of(lo);
    const auto f = [&](double th) {
      const double t = mid + hw * std::cos(th);
      return std::abs(detail::eval_shifted(gd.qcoef, gd.center, t)) /
             detail::sqrt_abs_w_rest(gd.edges, t, 2 * i, 2 * i + 1);
    };
    mass += quad::gauss_adaptive(f, th_lo, th_hi, 1e-12, 1e-16).value / pi;
  }
  return mass;
}

/// Sum of the Green's function over its critical points (the roots of q),
/// the Parreau-Widom constant of the set for the pole at infinity.
inline double pw_constant(const GreenData& gd) {
  double s = 0.0;
  for (double r : gd.q_roots) s += green(gd, r);
  return s;
}

/// A critical point of the pole-shifted Green's function, reported in the
/// original coordinates. `at_infinity` marks the critical point escaping to
/// infinity (symmetric configurations).
struct CriticalPoint {
  double location{0.0};
  double value{0.0};
  bool at_infinity{false};
};

/// Green's function data for a finite pole x0: the set is moved through
/// y = 1/(x - x0), where the pole sits at infinity and the standard
/// machinery applies.
struct PoleData {
  double x0{0.0};
  RealSet image;
  GreenData image_green;
  double g_at_x0{0.0};  // Green's function with pole at infinity, value at x0
  std::vector<CriticalPoint> critical;
  double pw_constant{0.0};
};

inline PoleData green_pole(const RealSet& set, double x0) {
  locate(set, x0);  // validates that x0 lies off the set
  PoleData pd;
  pd.x0 = x0;
  std::vector<Interval> images;
  for (const Interval& iv : set.intervals)
    images.push_back({1.0 / (iv.hi - x0), 1.0 / (iv.lo - x0)});
  pd.image = validate_set(std::move(images));
  pd.image_green = equilibrium(pd.image);
  pd.g_at_x0 = green(pd.image_green, 0.0);
  const double inf_tol = 1e-10 * pd.image.diameter();
  for (double y : pd.image_green.q_roots) {
    CriticalPoint cp;
    cp.value = green(pd.image_green, y);
    cp.at_infinity = std::abs(y) <= inf_tol;
    cp.location = cp.at_infinity
                      ? std::numeric_limits<double>::infinity()
                      : x0 + 1.0 / y;
    pd.critical.push_back(cp);
    pd.pw_constant += cp.value;
  }
  return pd;
}

/// Green's function of the original set with pole at x0.
inline double green_pole_eval(const PoleData& pd, double z) {
  if (z == pd.x0) return std::numeric_limits<double>::infinity();
  return green(pd.image_green, 1.0 / (z - pd.x0));
}

inline double green_pole_eval(const PoleData& pd, std::complex<double> z) {
  const std::complex<double> d = z - pd.x0;
  if (std::abs(d) == 0.0) return std::numeric_limits<double>::infinity();
  return green(pd.image_green, 1.0 / d);
}

}  // namespace respoly
