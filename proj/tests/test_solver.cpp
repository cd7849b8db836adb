#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "respoly/solver.hpp"

using namespace respoly;
using Catch::Matchers::WithinAbs;

namespace {

const RealSet kSym = validate_set({{-2.0, -1.0}, {1.0, 2.0}});

/// Checks the sign structure at the returned reference: |R| = r everywhere,
/// the sign pattern is (-1)^(k+1-j) sgn(x_j - x0), and both neighbors of the
/// gap holding x0 carry the positive level.
void require_alternation(const NormalizedProblem& prob,
                         const ResidualSolution& sol, double tol) {
  const auto& pts = sol.reference.points;
  REQUIRE(static_cast<int>(pts.size()) == sol.n + 1);
  const int k = sol.reference.split;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double side = (pts[j] < prob.x0) ? -1.0 : 1.0;
    const double sigma =
        ((k + 1 - static_cast<int>(j + 1)) % 2 == 0 ? 1.0 : -1.0) * side;
    REQUIRE(prob.set.contains(pts[j], 1e-9));
    REQUIRE_THAT(sol.poly(pts[j]), WithinAbs(sigma * sol.norm, tol));
  }
  if (k >= 1 && k <= sol.n) {
    REQUIRE(sol.poly(pts[k - 1]) > 0.0);
    REQUIRE(sol.poly(pts[k]) > 0.0);
  }
}

}  // namespace

TEST_CASE("reference_solve reproduces closed-form levelled systems",
          "[solver]") {
  SECTION("degree 1 on [0, 1] with the point on the right") {
    const ChebBasis basis{0.0, 1.0};
    ReferenceSet ref;
    ref.points = {0.0, 1.0};
    ref.split = 2;
    const auto [p, h] = reference_solve(basis, ref, 2.0, 1);
    REQUIRE_THAT(h, WithinAbs(1.0 / 3.0, 1e-14));
    REQUIRE_THAT(p.coeffs()[0], WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(p.coeffs()[1], WithinAbs(1.0 / 3.0, 1e-14));
    REQUIRE_THAT(p(2.0), WithinAbs(1.0, 1e-14));
  }
  SECTION("degree 2 on [-1, 1] against the scaled Chebyshev polynomial") {
    const ChebBasis basis{-1.0, 1.0};
    ReferenceSet ref;
    ref.points = {-1.0, 0.0, 1.0};
    ref.split = 3;
    const auto [p, h] = reference_solve(basis, ref, 2.0, 2);
    REQUIRE_THAT(h, WithinAbs(1.0 / 7.0, 1e-14));
    REQUIRE_THAT(p.coeffs()[0], WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(p.coeffs()[1], WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(p.coeffs()[2], WithinAbs(1.0 / 7.0, 1e-14));
  }
  SECTION("input validation") {
    const ChebBasis basis{0.0, 1.0};
    ReferenceSet ref;
    ref.points = {0.0, 1.0, 0.5};
    ref.split = 3;
    REQUIRE_THROWS_AS(reference_solve(basis, ref, 2.0, 2), InvalidInput);
    ref.points = {0.0, 1.0};
    REQUIRE_THROWS_AS(reference_solve(basis, ref, 2.0, 2), InvalidInput);
  }
}

TEST_CASE("solve_residual on the symmetric two-band set", "[solver]") {
  const NormalizedProblem prob = locate(kSym, 0.0);

  SECTION("degree 2 has the closed-form norm and coefficients") {
    const ResidualSolution s = solve_residual(prob, 2);
    REQUIRE(s.converged);
    REQUIRE(s.effective_degree == 2);
    REQUIRE_FALSE(s.degenerate);
    REQUIRE_THAT(s.norm, WithinAbs(0.6, 1e-12));
    REQUIRE_THAT(s.poly.coeffs()[0], WithinAbs(0.2, 1e-11));
    REQUIRE_THAT(s.poly.coeffs()[1], WithinAbs(0.0, 1e-11));
    REQUIRE_THAT(s.poly.coeffs()[2], WithinAbs(-0.8, 1e-11));
    REQUIRE_THAT(s.poly(prob.x0), WithinAbs(1.0, 1e-12));
    REQUIRE(s.levelling_defect <= 1e-12);
    require_alternation(prob, s, 1e-10);
  }

  SECTION("odd degrees degenerate to the even solution below") {
    const ResidualSolution s2 = solve_residual(prob, 2);
    const ResidualSolution s3 = solve_residual(prob, 3);
    REQUIRE(s3.converged);
    REQUIRE(s3.degenerate);
    REQUIRE(s3.effective_degree == 2);
    REQUIRE_THAT(s3.norm, WithinAbs(s2.norm, 1e-12));
    const DegreeReport rep = degree_report(prob, s3);
    REQUIRE(rep.degenerate);
    REQUIRE(rep.chebyshev_match);
    REQUIRE(rep.match_defect <= 1e-9);
  }

  SECTION("degree 4 matches the closed-form norm") {
    const ResidualSolution s4 = solve_residual(prob, 4);
    REQUIRE(s4.converged);
    REQUIRE(s4.effective_degree == 4);
    REQUIRE_THAT(s4.norm, WithinAbs(9.0 / 41.0, 1e-11));
    require_alternation(prob, s4, 1e-9);
  }

  SECTION("degree 1 degenerates to the constant") {
    const ResidualSolution s1 = solve_residual(prob, 1);
    REQUIRE(s1.converged);
    REQUIRE(s1.degenerate);
    REQUIRE(s1.effective_degree == 0);
    REQUIRE_THAT(s1.norm, WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(s1.poly(1.7), WithinAbs(1.0, 1e-14));
  }

  SECTION("norms decrease in the degree and never exceed one") {
    double prev = 1.0;
    for (int n = 1; n <= 10; ++n) {
      const ResidualSolution s = solve_residual(prob, n);
      REQUIRE(s.converged);
      REQUIRE(s.norm <= prev + 1e-12);
      REQUIRE(s.norm <= 1.0 + 1e-12);
      prev = s.norm;
    }
  }
}

TEST_CASE("solve_residual delegates to the monic problem off the hull",
          "[solver]") {
  const RealSet unit = validate_set({{-1.0, 1.0}});
  const NormalizedProblem prob = locate(unit, 2.0);
  for (int n = 1; n <= 6; ++n) {
    const ResidualSolution s = solve_residual(prob, n);
    REQUIRE(s.converged);
    REQUIRE(s.effective_degree == n);
    const double expect = 1.0 / chebyshev_first_kind(n, 2.0);
    REQUIRE_THAT(s.norm, WithinAbs(expect, 1e-11 * (1.0 + 1.0 / expect)));
    require_alternation(prob, s, 1e-10 * s.norm + 1e-14);
  }
  // Same closed form from the left side by symmetry.
  const ResidualSolution sl = solve_residual(locate(unit, -2.0), 3);
  REQUIRE_THAT(sl.norm, WithinAbs(1.0 / 26.0, 1e-12));
}

TEST_CASE("solve_residual handles the trivial degree", "[solver]") {
  const NormalizedProblem prob = locate(kSym, 0.0);
  const ResidualSolution s0 = solve_residual(prob, 0);
  REQUIRE(s0.converged);
  REQUIRE(s0.effective_degree == 0);
  REQUIRE(s0.norm == 1.0);
  REQUIRE(s0.poly(-1.3) == 1.0);
}

TEST_CASE("dual_residual rescales to sup norm one", "[solver]") {
  const NormalizedProblem prob = locate(kSym, 0.0);
  const ResidualSolution s = solve_residual(prob, 2);
  const auto [dual, value] = dual_residual(s);
  REQUIRE_THAT(value, WithinAbs(1.0 / 0.6, 1e-11));
  REQUIRE_THAT(dual(prob.x0), WithinAbs(value, 1e-11));
  // R is even here, so the hull endpoints share the sign -1: the alternation
  // pair flanking the normalization gap carries equal signs.
  REQUIRE_THAT(dual(-2.0), WithinAbs(-1.0, 1e-11));
  REQUIRE_THAT(dual(2.0), WithinAbs(-1.0, 1e-11));
}

TEST_CASE("chebyshev computes minimal monic polynomials", "[solver]") {
  SECTION("single interval closed form") {
    const RealSet unit = validate_set({{-1.0, 1.0}});
    for (int n = 1; n <= 6; ++n) {
      const ChebyshevSolution c = chebyshev(unit, n);
      REQUIRE(c.converged);
      REQUIRE_THAT(c.norm, WithinAbs(std::pow(2.0, 1 - n), 1e-13));
    }
  }
  SECTION("scaling of the interval") {
    // Minimal monic sup norm on [a, b] is 2 ((b - a) / 4)^n.
    const RealSet wide = validate_set({{0.0, 4.0}});
    const ChebyshevSolution c = chebyshev(wide, 3);
    REQUIRE_THAT(c.norm, WithinAbs(2.0, 1e-12));
    const RealSet half = validate_set({{0.0, 2.0}});
    REQUIRE_THAT(chebyshev(half, 3).norm, WithinAbs(0.25, 1e-13));
  }
  SECTION("symmetric two-band set has an exact quadratic") {
    const ChebyshevSolution c = chebyshev(kSym, 2);
    REQUIRE(c.converged);
    REQUIRE_THAT(c.norm, WithinAbs(1.5, 1e-12));
    REQUIRE_THAT(c.poly.coeffs()[0], WithinAbs(-0.5, 1e-11));
    REQUIRE_THAT(c.poly.coeffs()[1], WithinAbs(0.0, 1e-11));
    REQUIRE_THAT(c.poly.coeffs()[2], WithinAbs(2.0, 1e-11));
    const auto mono = to_monomial(c.poly);
    REQUIRE_THAT(mono[2], WithinAbs(1.0, 1e-11));
    REQUIRE_THAT(mono[1], WithinAbs(0.0, 1e-11));
    REQUIRE_THAT(mono[0], WithinAbs(-2.5, 1e-11));
  }
}

TEST_CASE("solve_residual levels on randomized problems", "[solver]") {
  std::mt19937 rng(20260814u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double g1 = 0.2 + unif(rng);
    const double len2 = 0.3 + unif(rng);
    const RealSet set = validate_set(
        {{-1.0 - unif(rng), -1.0}, {-1.0 + g1, -1.0 + g1 + len2}});
    const double x0 = -1.0 + g1 * (0.2 + 0.6 * unif(rng));
    const NormalizedProblem prob = locate(set, x0);
    const int n = 1 + static_cast<int>(unif(rng) * 8.0);
    const ResidualSolution s = solve_residual(prob, n);
    REQUIRE(s.converged);
    REQUIRE(s.norm <= 1.0 + 1e-12);
    REQUIRE(s.norm > 0.0);
    REQUIRE((s.effective_degree == n ||
             (s.degenerate && s.effective_degree == n - 1)));
    REQUIRE_THAT(s.poly(prob.x0), WithinAbs(1.0, 1e-9));
    REQUIRE(s.levelling_defect <= 1e-10);
    if (!s.degenerate) require_alternation(prob, s, 1e-8 * s.norm + 1e-13);
    // No point of the set may exceed the reported norm.
    for (const Interval& band : prob.set.intervals)
      for (int j = 0; j <= 40; ++j) {
        const double x = band.lo + band.length() * j / 40.0;
        REQUIRE(std::abs(s.poly(x)) <= s.norm * (1.0 + 1e-9));
      }
  }
}
