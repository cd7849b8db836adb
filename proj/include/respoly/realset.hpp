#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "respoly/errors.hpp"

namespace respoly {

/// Closed interval [lo, hi] with lo < hi.
struct Interval {
  double lo{0.0};
  double hi{0.0};

  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
  [[nodiscard]] double halfwidth() const { return 0.5 * (hi - lo); }
  [[nodiscard]] double length() const { return hi - lo; }
};

/// Finite union of disjoint closed intervals, kept sorted.
struct RealSet {
  std::vector<Interval> intervals;

  [[nodiscard]] std::size_t components() const { return intervals.size(); }
  [[nodiscard]] double hull_lo() const { return intervals.front().lo; }
  [[nodiscard]] double hull_hi() const { return intervals.back().hi; }
  [[nodiscard]] double diameter() const { return hull_hi() - hull_lo(); }

  /// Membership test with a symmetric geometric tolerance.
  [[nodiscard]] bool contains(double x, double tol = 0.0) const {
    for (const Interval& iv : intervals)
      if (x >= iv.lo - tol && x <= iv.hi + tol) return true;
    return false;
  }

  /// Distance from x to the set (0 when inside).
  [[nodiscard]] double distance(double x) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Interval& iv : intervals) {
      if (x >= iv.lo && x <= iv.hi) return 0.0;
      d = std::min(d, std::min(std::abs(x - iv.lo), std::abs(x - iv.hi)));
    }
    return d;
  }
};

/// Complement component of a RealSet. A bounded gap is (lo, hi) between two
/// consecutive intervals; the single unbounded gap is (hull_hi, +inf) joined
/// with (-inf, hull_lo) through infinity, stored with lo = hull_hi and
/// hi = hull_lo.
struct Gap {
  bool bounded{true};
  double lo{0.0};
  double hi{0.0};

  [[nodiscard]] bool contains(double x) const {
    return bounded ? (x > lo && x < hi) : (x > lo || x < hi);
  }
};

/// A set together with an admissible normalization point x0 off the set.
/// gap_index is the bounded-gap index holding x0, or nullopt when x0 lies in
/// the unbounded gap.
struct NormalizedProblem {
  RealSet set;
  double x0{0.0};
  std::optional<std::size_t> gap_index;
};

/// Builds a RealSet from raw [lo, hi] pairs: validates entries, sorts by lo,
/// and merges intervals that overlap or touch within `tol`.
/// Throws InvalidInput on empty input, non-finite endpoints, or lo >= hi.
inline RealSet validate_set(std::vector<Interval> raw, double tol = 0.0) {
  if (raw.empty()) throw InvalidInput("validate_set: no intervals");
  if (tol < 0.0) throw InvalidInput("validate_set: negative tolerance");
  for (const Interval& iv : raw) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw InvalidInput("validate_set: non-finite endpoint");
    if (!(iv.lo < iv.hi))
      throw InvalidInput("validate_set: interval needs lo < hi");
  }
  std::sort(raw.begin(), raw.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  RealSet out;
  out.intervals.push_back(raw.front());
  for (std::size_t i = 1; i < raw.size(); ++i) {
    Interval& last = out.intervals.back();
    if (raw[i].lo <= last.hi + tol)
      last.hi = std::max(last.hi, raw[i].hi);
    else
      out.intervals.push_back(raw[i]);
  }
  return out;
}

/// Enumerates the complement components: components()-1 bounded gaps in
/// increasing order, then the unbounded gap.
inline std::vector<Gap> gaps(const RealSet& set) {
  std::vector<Gap> out;
  for (std::size_t i = 0; i + 1 < set.intervals.size(); ++i)
    out.push_back({true, set.intervals[i].hi, set.intervals[i + 1].lo});
  out.push_back({false, set.hull_hi(), set.hull_lo()});
  return out;
}

/// Locates x0 relative to the set and packages the normalized problem.
/// Throws InvalidInput when x0 lies on the set (endpoints included) within
/// `tol`, or is not finite.
inline NormalizedProblem locate(const RealSet& set, double x0,
                                double tol = 0.0) {
  if (!std::isfinite(x0)) throw InvalidInput("locate: x0 must be finite");
  if (set.contains(x0, tol))
    throw InvalidInput("locate: x0 lies on the set");
  NormalizedProblem prob;
  prob.set = set;
  prob.x0 = x0;
  for (std::size_t i = 0; i + 1 < set.intervals.size(); ++i) {
    if (x0 > set.intervals[i].hi && x0 < set.intervals[i + 1].lo) {
      prob.gap_index = i;
      break;
    }
  }
  return prob;
}

/// Componentwise equality of two sets within an endpoint tolerance.
inline bool sets_match(const RealSet& a, const RealSet& b, double tol) {
  if (a.intervals.size() != b.intervals.size()) return false;
  for (std::size_t i = 0; i < a.intervals.size(); ++i) {
    if (std::abs(a.intervals[i].lo - b.intervals[i].lo) > tol) return false;
    if (std::abs(a.intervals[i].hi - b.intervals[i].hi) > tol) return false;
  }
  return true;
}

}  // namespace respoly
