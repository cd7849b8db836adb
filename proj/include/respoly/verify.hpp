#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "respoly/bands.hpp"
#include "respoly/oracle.hpp"
#include "respoly/orbit.hpp"
#include "respoly/potential.hpp"
#include "respoly/realset.hpp"
#include "respoly/solver.hpp"

namespace respoly {

/// One self-check: |observed - expected| <= bound, or a named predicate.
struct VerifyCheck {
  std::string name;
  bool passed{false};
  double observed{0.0};
  double expected{0.0};
  double bound{0.0};
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_passed{true};
};

namespace detail {

inline void check_close(VerifyReport& rep, const std::string& name,
                        double observed, double expected, double bound) {
  VerifyCheck c;
  c.name = name;
  c.observed = observed;
  c.expected = expected;
  c.bound = bound;
  c.passed = std::abs(observed - expected) <= bound;
  rep.all_passed = rep.all_passed && c.passed;
  rep.checks.push_back(std::move(c));
}

}  // namespace detail

/// Fast closed-form identities: capacities, Green's values, explicit norms.
inline VerifyReport verify_quick() {
  VerifyReport rep;
  const RealSet unit = validate_set({{-1.0, 1.0}});
  const RealSet shifted = validate_set({{0.0, 1.0}});
  const RealSet sym = validate_set({{-2.0, -1.0}, {1.0, 2.0}});

  const GreenData gd_unit = equilibrium(unit);
  detail::check_close(rep, "capacity of [-1,1] is 1/2", gd_unit.capacity, 0.5,
                      1e-10);
  detail::check_close(rep, "capacity of [0,1] is 1/4",
                      equilibrium(shifted).capacity, 0.25, 1e-10);
  const GreenData gd_sym = equilibrium(sym);
  detail::check_close(rep, "capacity of [-2,-1]u[1,2] is sqrt(3)/2",
                      gd_sym.capacity, std::sqrt(3.0) / 2.0, 1e-10);
  detail::check_close(rep, "green of [-1,1] at 2 is log(2+sqrt(3))",
                      green(gd_unit, 2.0), std::log(2.0 + std::sqrt(3.0)),
                      1e-10);
  detail::check_close(rep, "green of [-2,-1]u[1,2] at 0 is log(3)/2",
                      green(gd_sym, 0.0), 0.5 * std::log(3.0), 1e-10);
  detail::check_close(rep, "band masses of [-2,-1]u[1,2] are 1/2",
                      gd_sym.band_measure[0], 0.5, 1e-10);

  ChebyshevSolution cheb = chebyshev(sym, 2);
  detail::check_close(rep, "monic minimal norm on [-2,-1]u[1,2] at n=2 is 3/2",
                      cheb.norm, 1.5, 1e-10);

  const NormalizedProblem prob = locate(sym, 0.0);
  const ResidualSolution sol2 = solve_residual(prob, 2);
  detail::check_close(rep, "residual norm at n=2 is 3/5", sol2.norm, 0.6,
                      1e-10);
  const ResidualSolution sol4 = solve_residual(prob, 4);
  detail::check_close(rep, "residual norm at n=4 is 9/41", sol4.norm,
                      9.0 / 41.0, 1e-10);
  detail::check_close(rep, "norm identity at n=4",
                      norm_identity_defect(prob, sol4), 0.0, 1e-10);
  const ResidualSolution sol3 = solve_residual(prob, 3);
  detail::check_close(rep, "Widom factor at n=3 is 28 sqrt(3)/15",
                      widom_factor(sol3, green(gd_sym, 0.0)),
                      28.0 * std::sqrt(3.0) / 15.0, 1e-9);
  return rep;
}

/// Adds the heavier cross-checks: the grid oracle, band extraction, the
/// pole-shifted Parreau-Widom constant, and affine equivariance.
inline VerifyReport verify_full() {
  VerifyReport rep = verify_quick();
  const RealSet sym = validate_set({{-2.0, -1.0}, {1.0, 2.0}});
  const NormalizedProblem prob = locate(sym, 0.0);

  const ResidualSolution sol5 = solve_residual(prob, 5);
  const oracle::OracleResult lp = oracle::minimax(prob, 5, 600);
  VerifyCheck lower;
  lower.name = "grid oracle stays below the continuum norm at n=5";
  lower.observed = lp.t;
  lower.expected = sol5.norm;
  lower.bound = 1e-10;
  lower.passed = lp.t <= sol5.norm + 1e-10;
  rep.all_passed = rep.all_passed && lower.passed;
  rep.checks.push_back(lower);
  detail::check_close(rep, "grid oracle matches the norm at n=5 to 1e-4",
                      lp.t, sol5.norm, 1e-4 * sol5.norm);

  const RealSet variant = validate_set({{-2.0, -1.0}, {1.0, 1.5}});
  const NormalizedProblem vprob = locate(variant, 0.0);
  const ResidualSolution vsol = solve_residual(vprob, 2);
  const BandSet bs = band_set(vprob, vsol);
  detail::check_close(rep, "band count of the n=2 level set",
                      static_cast<double>(bs.split_band_count), 2.0, 0.0);
  detail::check_close(rep, "outer band edge of the n=2 level set",
                      bs.bands.intervals.back().hi, 2.0, 1e-8);

  const PoleData pd = green_pole(sym, 0.0);
  detail::check_close(rep, "pole-shifted Parreau-Widom constant is log(3)/2",
                      pd.pw_constant, 0.5 * std::log(3.0), 1e-9);

  const RealSet moved = validate_set({{-1.3, -0.3}, {1.7, 2.7}});
  const ResidualSolution msol = solve_residual(locate(moved, 0.7), 4);
  const ResidualSolution base = solve_residual(prob, 4);
  detail::check_close(rep, "translation equivariance of the norm", msol.norm,
                      base.norm, 1e-10);
  const RealSet scaled = validate_set({{-5.0, -2.5}, {2.5, 5.0}});
  const ResidualSolution ssol = solve_residual(locate(scaled, 0.0), 4);
  detail::check_close(rep, "scaling invariance of the norm", ssol.norm,
                      base.norm, 1e-10);
  return rep;
}

}  // namespace respoly
