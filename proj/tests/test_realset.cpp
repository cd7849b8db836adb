#include <catch2/catch_amalgamated.hpp>

#include "respoly/realset.hpp"

using namespace respoly;

TEST_CASE("validate_set sorts, merges, and rejects bad input", "[realset]") {
  SECTION("intervals are sorted by left endpoint") {
    const RealSet s = validate_set({{1.0, 2.0}, {-2.0, -1.0}});
    REQUIRE(s.components() == 2);
    REQUIRE(s.intervals[0].lo == -2.0);
    REQUIRE(s.intervals[1].lo == 1.0);
  }
  SECTION("overlapping intervals merge into one component") {
    const RealSet s = validate_set({{0.0, 1.0}, {0.5, 2.0}});
    REQUIRE(s.components() == 1);
    REQUIRE(s.intervals[0].lo == 0.0);
    REQUIRE(s.intervals[0].hi == 2.0);
  }
  SECTION("touching within tolerance merges") {
    const RealSet s = validate_set({{0.0, 1.0}, {1.0 + 1e-12, 2.0}}, 1e-9);
    REQUIRE(s.components() == 1);
  }
  SECTION("separated beyond tolerance stays split") {
    const RealSet s = validate_set({{0.0, 1.0}, {1.1, 2.0}}, 1e-9);
    REQUIRE(s.components() == 2);
  }
  SECTION("nested interval is absorbed") {
    const RealSet s = validate_set({{0.0, 3.0}, {1.0, 2.0}});
    REQUIRE(s.components() == 1);
    REQUIRE(s.intervals[0].hi == 3.0);
  }
  SECTION("invalid input throws") {
    REQUIRE_THROWS_AS(validate_set({}), InvalidInput);
    REQUIRE_THROWS_AS(validate_set({{1.0, 1.0}}), InvalidInput);
    REQUIRE_THROWS_AS(validate_set({{2.0, 1.0}}), InvalidInput);
    const double inf = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(validate_set({{0.0, inf}}), InvalidInput);
    REQUIRE_THROWS_AS(validate_set({{0.0, std::nan("")}}), InvalidInput);
    REQUIRE_THROWS_AS(validate_set({{0.0, 1.0}}, -1.0), InvalidInput);
  }
}

TEST_CASE("RealSet geometry helpers", "[realset]") {
  const RealSet s = validate_set({{-2.0, -1.0}, {1.0, 2.0}});
  REQUIRE(s.hull_lo() == -2.0);
  REQUIRE(s.hull_hi() == 2.0);
  REQUIRE(s.diameter() == 4.0);
  REQUIRE(s.contains(-1.5));
  REQUIRE(s.contains(1.0));
  REQUIRE_FALSE(s.contains(0.0));
  REQUIRE(s.contains(2.0 + 1e-10, 1e-9));
  REQUIRE(s.distance(0.0) == 1.0);
  REQUIRE(s.distance(1.5) == 0.0);
  REQUIRE(s.distance(3.0) == 1.0);
}

TEST_CASE("gaps enumerates bounded gaps then the unbounded one", "[realset]") {
  const RealSet s = validate_set({{-3.0, -2.0}, {0.0, 1.0}, {2.0, 3.0}});
  const auto gs = gaps(s);
  REQUIRE(gs.size() == 3);
  REQUIRE(gs[0].bounded);
  REQUIRE(gs[0].lo == -2.0);
  REQUIRE(gs[0].hi == 0.0);
  REQUIRE(gs[1].bounded);
  REQUIRE(gs[1].lo == 1.0);
  REQUIRE(gs[1].hi == 2.0);
  REQUIRE_FALSE(gs[2].bounded);
  REQUIRE(gs[2].contains(4.0));
  REQUIRE(gs[2].contains(-4.0));
  REQUIRE_FALSE(gs[2].contains(0.5));
  REQUIRE(gs[0].contains(-1.0));
  REQUIRE_FALSE(gs[0].contains(1.5));
}

TEST_CASE("locate classifies the normalization point", "[realset]") {
  const RealSet s = validate_set({{-2.0, -1.0}, {1.0, 2.0}});
  SECTION("bounded gap") {
    const NormalizedProblem p = locate(s, 0.0);
    REQUIRE(p.gap_index.has_value());
    REQUIRE(*p.gap_index == 0);
    REQUIRE(p.x0 == 0.0);
  }
  SECTION("unbounded gap on either side") {
    REQUIRE_FALSE(locate(s, 3.0).gap_index.has_value());
    REQUIRE_FALSE(locate(s, -3.0).gap_index.has_value());
  }
  SECTION("points on the set are rejected") {
    REQUIRE_THROWS_AS(locate(s, 1.5), InvalidInput);
    REQUIRE_THROWS_AS(locate(s, -1.0), InvalidInput);
    REQUIRE_THROWS_AS(locate(s, 2.0), InvalidInput);
    REQUIRE_THROWS_AS(locate(s, 2.0 + 1e-12, 1e-9), InvalidInput);
    const double inf = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(locate(s, inf), InvalidInput);
  }
}

TEST_CASE("sets_match compares componentwise within tolerance", "[realset]") {
  const RealSet a = validate_set({{-2.0, -1.0}, {1.0, 2.0}});
  const RealSet b = validate_set({{-2.0 + 1e-11, -1.0}, {1.0, 2.0 - 1e-11}});
  REQUIRE(sets_match(a, b, 1e-9));
  REQUIRE_FALSE(sets_match(a, b, 1e-13));
  const RealSet c = validate_set({{-2.0, 2.0}});
  REQUIRE_FALSE(sets_match(a, c, 1.0));
}
