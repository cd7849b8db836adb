#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "respoly/potential.hpp"

using namespace respoly;
using Catch::Matchers::WithinAbs;

namespace {

const RealSet kSym = validate_set({{-2.0, -1.0}, {1.0, 2.0}});

/// Green's function of a single interval through the Joukowski chart.
double interval_green(double lo, double hi, double x) {
  const double u = std::abs((2.0 * x - lo - hi) / (hi - lo));
  if (u <= 1.0) return 0.0;
  return std::log(u + std::sqrt(u * u - 1.0));
}

}  // namespace

TEST_CASE("capacity matches closed forms", "[potential]") {
  REQUIRE_THAT(equilibrium(validate_set({{-1.0, 1.0}})).capacity,
               WithinAbs(0.5, 1e-10));
  REQUIRE_THAT(equilibrium(validate_set({{0.0, 1.0}})).capacity,
               WithinAbs(0.25, 1e-10));
  REQUIRE_THAT(equilibrium(validate_set({{-5.0, 3.0}})).capacity,
               WithinAbs(2.0, 1e-10));
  REQUIRE_THAT(equilibrium(kSym).capacity,
               WithinAbs(std::sqrt(3.0) / 2.0, 1e-10));
}

TEST_CASE("single-interval Green's function has the Joukowski form",
          "[potential]") {
  const GreenData gd = equilibrium(validate_set({{-1.0, 1.0}}));
  REQUIRE_THAT(green(gd, 2.0), WithinAbs(std::log(2.0 + std::sqrt(3.0)), 1e-10));
  for (double x : {-3.0, -1.4, 1.01, 1.7, 4.0, 25.0})
    REQUIRE_THAT(green(gd, x), WithinAbs(interval_green(-1.0, 1.0, x), 1e-9));
  REQUIRE(green(gd, 0.3) == 0.0);
  REQUIRE(green(gd, -1.0) == 0.0);

  const GreenData shifted = equilibrium(validate_set({{2.0, 6.0}}));
  for (double x : {0.0, 1.9, 6.5, 11.0})
    REQUIRE_THAT(green(shifted, x), WithinAbs(interval_green(2.0, 6.0, x), 1e-9));
}

TEST_CASE("equilibrium measure of the symmetric set", "[potential]") {
  const GreenData gd = equilibrium(kSym);
  REQUIRE(gd.band_measure.size() == 2);
  REQUIRE_THAT(gd.band_measure[0], WithinAbs(0.5, 1e-11));
  REQUIRE_THAT(gd.band_measure[1], WithinAbs(0.5, 1e-11));
  REQUIRE_THAT(gd.band_measure[0] + gd.band_measure[1], WithinAbs(1.0, 1e-11));
  // One root of the gap polynomial, pinned to the middle by symmetry.
  REQUIRE(gd.q_roots.size() == 1);
  REQUIRE_THAT(gd.q_roots[0], WithinAbs(0.0, 1e-11));
  // Centered moments: odd ones vanish, the second is 5/2.
  REQUIRE_THAT(gd.center, WithinAbs(0.0, 1e-13));
  REQUIRE_THAT(gd.moments[0], WithinAbs(0.0, 1e-10));
  REQUIRE_THAT(gd.moments[1], WithinAbs(2.5, 1e-9));
  REQUIRE_THAT(gd.moments[2], WithinAbs(0.0, 1e-9));
  REQUIRE_THAT(green(gd, 0.0), WithinAbs(0.5 * std::log(3.0), 1e-10));
}

TEST_CASE("arcsine moments on the unit interval", "[potential]") {
  const GreenData gd = equilibrium(validate_set({{-1.0, 1.0}}));
  REQUIRE_THAT(gd.moments[0], WithinAbs(0.0, 1e-11));
  REQUIRE_THAT(gd.moments[1], WithinAbs(0.5, 1e-10));
  REQUIRE_THAT(gd.moments[2], WithinAbs(0.0, 1e-10));
  REQUIRE_THAT(gd.moments[3], WithinAbs(0.375, 1e-10));
}

TEST_CASE("harmonic measure is additive and matches the arcsine law",
          "[potential]") {
  SECTION("single interval") {
    const GreenData gd = equilibrium(validate_set({{-1.0, 1.0}}));
    for (double x : {-0.9, -0.3, 0.2, 0.8}) {
      const double ref = 1.0 - std::acos(x) / std::numbers::pi;
      REQUIRE_THAT(harmonic_measure(gd, -1.0, x), WithinAbs(ref, 1e-9));
    }
    REQUIRE_THAT(harmonic_measure(gd, -1.0, 1.0), WithinAbs(1.0, 1e-10));
  }
  SECTION("two bands") {
    const GreenData gd = equilibrium(kSym);
    const double left = harmonic_measure(gd, -2.0, -1.0);
    const double inner = harmonic_measure(gd, 1.0, 1.5);
    const double outer = harmonic_measure(gd, 1.5, 2.0);
    REQUIRE_THAT(left, WithinAbs(0.5, 1e-10));
    REQUIRE_THAT(inner + outer, WithinAbs(0.5, 1e-10));
    REQUIRE(outer > inner);
    REQUIRE_THAT(harmonic_measure(gd, -2.0, 2.0), WithinAbs(1.0, 1e-10));
    // The window may stick into the gap without picking up mass.
    REQUIRE_THAT(harmonic_measure(gd, -2.5, -0.5), WithinAbs(0.5, 1e-10));
  }
}

TEST_CASE("complex Green's function is consistent across branches",
          "[potential]") {
  const GreenData gd = equilibrium(kSym);
  SECTION("agrees with the real path close to the axis") {
    for (double x : {0.0, 0.5, 2.5, -3.1}) {
      const double gr = green(gd, x);
      const double gc = green(gd, std::complex<double>(x, 1e-9));
      REQUIRE_THAT(gc, WithinAbs(gr, 1e-7));
    }
  }
  SECTION("continuous across the far-field switch radius") {
    // The series and quadrature paths hand over near |z - c| = 3 radius = 6.
    // Both sides must agree with the closed form obtained through the square
    // map: g(z) = log|u + sqrt(u^2 - 1)| / 2 with u = (2 z^2 - 5) / 3.
    const auto exact = [](std::complex<double> z) {
      const std::complex<double> u = (2.0 * z * z - 5.0) / 3.0;
      std::complex<double> w = u + std::sqrt(u * u - 1.0);
      if (std::abs(w) < 1.0) w = u - std::sqrt(u * u - 1.0);
      return 0.5 * std::log(std::abs(w));
    };
    for (double arg : {0.3, 1.2, 2.2}) {
      const std::complex<double> dir{std::cos(arg), std::sin(arg)};
      REQUIRE_THAT(green(gd, 5.999 * dir),
                   WithinAbs(exact(5.999 * dir), 1e-10));
      REQUIRE_THAT(green(gd, 6.001 * dir),
                   WithinAbs(exact(6.001 * dir), 1e-10));
    }
  }
  SECTION("far field approaches log distance minus log capacity") {
    const std::complex<double> z{700.0, 300.0};
    const double expect = std::log(std::abs(z)) - gd.log_capacity;
    REQUIRE_THAT(green(gd, z), WithinAbs(expect, 1e-5));
  }
  SECTION("symmetric under conjugation and reflection") {
    const std::complex<double> z{0.7, 0.9};
    REQUIRE_THAT(green(gd, z), WithinAbs(green(gd, std::conj(z)), 1e-12));
    REQUIRE_THAT(green(gd, z), WithinAbs(green(gd, -z), 1e-9));
  }
}

TEST_CASE("pw_constant sums the Green's function over the critical points",
          "[potential]") {
  REQUIRE_THAT(pw_constant(equilibrium(kSym)),
               WithinAbs(0.5 * std::log(3.0), 1e-9));
  // No bounded gap, no critical points.
  REQUIRE(pw_constant(equilibrium(validate_set({{-1.0, 1.0}}))) == 0.0);
}

TEST_CASE("pole-shifted Green's function", "[potential]") {
  SECTION("symmetric set with the pole at the gap center") {
    const PoleData pd = green_pole(kSym, 0.0);
    REQUIRE_THAT(pd.pw_constant, WithinAbs(0.5 * std::log(3.0), 1e-9));
    REQUIRE_THAT(pd.g_at_x0, WithinAbs(0.5 * std::log(3.0), 1e-9));
    REQUIRE(pd.critical.size() == 1);
    REQUIRE(pd.critical[0].at_infinity);
    // Vanishes on the set, positive off it, infinite at the pole.
    REQUIRE(green_pole_eval(pd, -1.5) == 0.0);
    REQUIRE(green_pole_eval(pd, 0.5) > 0.0);
    REQUIRE(std::isinf(green_pole_eval(pd, 0.0)));
    // Even in z by the symmetry of the configuration.
    REQUIRE_THAT(green_pole_eval(pd, 0.3), WithinAbs(green_pole_eval(pd, -0.3), 1e-10));
  }
  SECTION("interval with an exterior pole recovers the pole at infinity") {
    const RealSet unit = validate_set({{-1.0, 1.0}});
    const PoleData pd = green_pole(unit, 2.0);
    REQUIRE(pd.critical.empty());
    REQUIRE(pd.pw_constant == 0.0);
    REQUIRE_THAT(pd.g_at_x0, WithinAbs(std::log(2.0 + std::sqrt(3.0)), 1e-9));
  }
  SECTION("symmetry of the kernel in its two arguments") {
    const double pairs[][2] = {{0.0, 3.0},  {0.2, 2.5},  {-0.4, 4.0},
                               {0.5, -3.0}, {-0.7, 0.6}, {2.2, 3.5}};
    for (const auto& pr : pairs) {
      const double a = pr[0], b = pr[1];
      const double gab = green_pole_eval(green_pole(kSym, a), b);
      const double gba = green_pole_eval(green_pole(kSym, b), a);
      REQUIRE_THAT(gab, WithinAbs(gba, 1e-8));
    }
  }
  SECTION("pole on the set is rejected") {
    REQUIRE_THROWS_AS(green_pole(kSym, 1.5), InvalidInput);
  }
}

TEST_CASE("equilibrium handles three bands", "[potential]") {
  const RealSet three = validate_set({{-3.0, -2.0}, {0.0, 1.0}, {2.0, 3.0}});
  const GreenData gd = equilibrium(three);
  REQUIRE(gd.band_measure.size() == 3);
  double total = 0.0;
  for (double m : gd.band_measure) {
    REQUIRE(m > 0.0);
    total += m;
  }
  REQUIRE_THAT(total, WithinAbs(1.0, 1e-11));
  REQUIRE(gd.q_roots.size() == 2);
  REQUIRE(gd.q_roots[0] > -2.0);
  REQUIRE(gd.q_roots[0] < 0.0);
  REQUIRE(gd.q_roots[1] > 1.0);
  REQUIRE(gd.q_roots[1] < 2.0);
  REQUIRE(green(gd, 0.5) == 0.0);
  REQUIRE(green(gd, -1.0) > 0.0);
  REQUIRE(green(gd, 1.5) > 0.0);
  REQUIRE(green(gd, 4.0) > 0.0);
}

TEST_CASE("scaling and translation of the equilibrium data", "[potential]") {
  // Capacity scales linearly; the Green's function value is invariant under
  // the affine map applied to both the set and the evaluation point.
  const GreenData base = equilibrium(kSym);
  const RealSet scaled = validate_set({{-4.0, -2.0}, {2.0, 4.0}});
  const GreenData gs = equilibrium(scaled);
  REQUIRE_THAT(gs.capacity, WithinAbs(2.0 * base.capacity, 1e-9));
  REQUIRE_THAT(green(gs, 1.0), WithinAbs(green(base, 0.5), 1e-10));

  const RealSet moved = validate_set({{-1.0, 0.0}, {2.0, 3.0}});
  const GreenData gm = equilibrium(moved);
  REQUIRE_THAT(gm.capacity, WithinAbs(base.capacity, 1e-10));
  REQUIRE_THAT(green(gm, 1.3), WithinAbs(green(base, 0.3), 1e-10));
}
