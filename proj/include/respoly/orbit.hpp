#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "respoly/bands.hpp"
#include "respoly/errors.hpp"
#include "respoly/potential.hpp"
#include "respoly/realset.hpp"
#include "respoly/solver.hpp"

namespace respoly {

/// Torus coordinates of the set: the equilibrium masses of the first m - 1
/// bands. The norm sequence is controlled by the orbit n * omega mod Z^(m-1).
inline std::vector<double> character_vector(const GreenData& gd) {
  std::vector<double> omega(gd.band_measure.begin(),
                            gd.band_measure.end() - 1);
  return omega;
}

inline double distance_to_integers(double x) {
  return std::abs(x - std::round(x));
}

/// Indices n <= n_max whose orbit point n * omega returns to the origin of
/// the torus within eps in the max metric.
struct NearReturn {
  int n{0};
  double distance{0.0};
};

inline std::vector<NearReturn> near_returns(const std::vector<double>& omega,
                                            int n_max, double eps) {
  if (n_max < 1) throw InvalidInput("near_returns: n_max must be >= 1");
  if (!(eps >= 0.0)) throw InvalidInput("near_returns: eps must be >= 0");
  std::vector<NearReturn> out;
  for (int n = 1; n <= n_max; ++n) {
    double d = 0.0;
    for (double w : omega) d = std::max(d, distance_to_integers(n * w));
    if (d <= eps) out.push_back({n, d});
  }
  return out;
}

struct WidomRecord {
  int n{0};
  double norm{0.0};
  int effective_degree{0};
  bool degenerate{false};
  bool converged{false};
  double widom{0.0};
  double char_distance{0.0};  // max_i dist(n omega_i, Z)
};

struct WidomSweep {
  std::vector<WidomRecord> records;
  std::vector<double> omega;
  double g_at_x0{0.0};
  double pw{0.0};           // Parreau-Widom constant for the pole at x0
  double lower_bound{2.0};  // every Widom factor is >= 2
  double upper_bound{0.0};  // 2 e^{pw}
  double min_widom{0.0};
  double max_widom{0.0};
  double liminf_estimate{0.0};  // tail minimum (second half of the sweep)
  double limsup_estimate{0.0};  // tail maximum
  bool single_band{false};      // one band: the factors are identically 2
};

/// Solves the extremal problem for n = 1 .. n_max and aggregates the Widom
/// factors together with the orbit data. Work is distributed over `jobs`
/// threads; the aggregation order is by n, independent of scheduling.
inline WidomSweep widom_sweep(const NormalizedProblem& prob, int n_max,
                              const SolverOptions& opts = {}, int jobs = 1) {
  if (n_max < 1) throw InvalidInput("widom_sweep: n_max must be >= 1");
  if (jobs < 1) throw InvalidInput("widom_sweep: jobs must be >= 1");

  WidomSweep sweep;
  const GreenData gd = equilibrium(prob.set);
  sweep.omega = character_vector(gd);
  sweep.g_at_x0 = green(gd, prob.x0);
  const PoleData pd = green_pole(prob.set, prob.x0);
  sweep.pw = pd.pw_constant;
  sweep.upper_bound = 2.0 * std::exp(sweep.pw);
  sweep.single_band = prob.set.components() == 1;
  sweep.records.resize(static_cast<std::size_t>(n_max));

  std::atomic<int> next{1};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const int n = next.fetch_add(1);
      if (n > n_max || failed.load()) return;
      try {
        const ResidualSolution sol = solve_residual(prob, n, opts);
        WidomRecord rec;
        rec.n = n;
        rec.norm = sol.norm;
        rec.effective_degree = sol.effective_degree;
        rec.degenerate = sol.degenerate;
        rec.converged = sol.converged;
        rec.widom = widom_factor(sol, sweep.g_at_x0);
        double d = 0.0;
        for (double w : sweep.omega)
          d = std::max(d, distance_to_integers(n * w));
        rec.char_distance = d;
        sweep.records[static_cast<std::size_t>(n - 1)] = rec;
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::min(jobs, n_max);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);

  sweep.min_widom = sweep.records.front().widom;
  sweep.max_widom = sweep.records.front().widom;
  for (const WidomRecord& rec : sweep.records) {
    sweep.min_widom = std::min(sweep.min_widom, rec.widom);
    sweep.max_widom = std::max(sweep.max_widom, rec.widom);
  }
  const std::size_t tail = sweep.records.size() / 2;
  sweep.liminf_estimate = sweep.records[tail].widom;
  sweep.limsup_estimate = sweep.records[tail].widom;
  for (std::size_t i = tail; i < sweep.records.size(); ++i) {
    sweep.liminf_estimate = std::min(sweep.liminf_estimate,
                                     sweep.records[i].widom);
    sweep.limsup_estimate = std::max(sweep.limsup_estimate,
                                     sweep.records[i].widom);
  }
  return sweep;
}

/// Exponent of the comparison |M_n(z)| = exp(-n g(z) + d g_n(z)): the band
/// Green's function never exceeds (n/d times) the Green's function of the
/// input set, so the exponent is nonpositive up to quadrature error.
inline double comparison_exponent(const GreenData& gd,
                                  const ResidualSolution& sol,
                                  std::complex<double> z) {
  return -sol.n * green(gd, z) +
         sol.effective_degree * green_period(sol, z);
}

/// exp(n (g(x0) - g(z))) |R_n(z)|: bounded in n, and tending to 1 along
/// subsequences whose orbit returns near the origin of the torus.
inline double normalized_magnitude(const GreenData& gd,
                                   const NormalizedProblem& prob,
                                   const ResidualSolution& sol,
                                   std::complex<double> z) {
  const double gz = green(gd, z);
  const double gx = green(gd, prob.x0);
  return std::exp(sol.n * (gx - gz)) * std::abs(sol.poly(z));
}

/// Zero-counting prediction of the normalized magnitude: the product of
/// exp(-g(z, z_k)) over the zeros lying off the set, renormalized to 1 at x0,
/// with one pole-at-infinity factor when the degree drops. Comparable to
/// exp(n (g(x0) - g(z))) |R_n(z)| away from the set.
inline double magnitude_prediction(const NormalizedProblem& prob,
                                   const ResidualSolution& sol,
                                   const GreenData& gd,
                                   std::complex<double> z) {
  const auto zeros = zero_report(prob, sol);
  double expo = 0.0;
  for (const ZeroInfo& gz : zeros) {
    // Zeros inside a band contribute a trivial factor: the Green's function
    // with pole on the set vanishes identically in the limit.
    if (gz.where == ZeroInfo::Where::band) continue;
    const PoleData pd = green_pole(prob.set, gz.x);
    expo += -green_pole_eval(pd, z) + green_pole_eval(pd, prob.x0);
  }
  if (sol.effective_degree == sol.n - 1)
    expo += -green(gd, z) + green(gd, prob.x0);
  return std::exp(expo);
}

}  // namespace respoly
