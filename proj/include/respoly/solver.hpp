#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "respoly/errors.hpp"
#include "respoly/linalg.hpp"
#include "respoly/poly.hpp"
#include "respoly/realset.hpp"

namespace respoly {

/// Ordered extremal reference. `split` counts the points lying left of x0.
struct ReferenceSet {
  std::vector<double> points;
  int split{0};
};

struct SolverOptions {
  double tol{1e-12};       // relative levelling defect target
  int max_iterations{200};
};

/// Minimal-norm polynomial normalized to 1 at x0, with its certificate.
struct ResidualSolution {
  int n{0};
  int effective_degree{0};
  Polynomial poly;
  double norm{1.0};
  ReferenceSet reference;
  int sign_at_top{1};
  int iterations{0};
  double levelling_defect{0.0};
  bool degenerate{false};  // effective_degree == n - 1
  bool converged{true};
  std::string diagnostic;
};

/// Monic minimal-norm polynomial (classical Chebyshev problem).
struct ChebyshevSolution {
  Polynomial poly;
  double norm{0.0};
  ReferenceSet reference;
  int iterations{0};
  double levelling_defect{0.0};
  bool converged{true};
};

namespace detail {

inline std::vector<double> basis_row(const ChebBasis& basis, double x, int n) {
  std::vector<double> phi(static_cast<std::size_t>(n) + 1);
  const double u = basis.to_unit(x);
  phi[0] = 1.0;
  if (n >= 1) phi[1] = u;
  for (int k = 2; k <= n; ++k) phi[k] = 2.0 * u * phi[k - 1] - phi[k - 2];
  return phi;
}

/// Sign sigma_j = (-1)^{k+1-j} sgn(x_j - x0) of the levelled value at the
/// j-th reference point (0-based), for a reference with split k.
inline double split_sign(int k, int j0, double side) {
  const double alt = ((k - j0) % 2 == 0) ? 1.0 : -1.0;
  return alt * side;
}

}  // namespace detail

/// Solves the levelled interpolation system on an (n+2)-point structure:
/// p(x_j) = sigma_j h at the n+1 reference points and p(x0) = 1. Returns the
/// polynomial and the signed level h; the alternation level is |h|.
inline std::pair<Polynomial, double> reference_solve(const ChebBasis& basis,
                                                     const ReferenceSet& ref,
                                                     double x0, int n) {
  const int rows = n + 2;
  if (static_cast<int>(ref.points.size()) != n + 1)
    throw InvalidInput("reference_solve: reference needs n + 1 points");
  for (std::size_t j = 1; j < ref.points.size(); ++j)
    if (!(ref.points[j - 1] < ref.points[j]))
      throw InvalidInput("reference_solve: reference must be increasing");

  std::vector<double> a(static_cast<std::size_t>(rows) * rows, 0.0);
  std::vector<double> b(rows, 0.0);
  for (int j = 0; j <= n; ++j) {
    const double x = ref.points[j];
    const double side = (x < x0) ? -1.0 : 1.0;
    const std::vector<double> phi = detail::basis_row(basis, x, n);
    for (int i = 0; i <= n; ++i) a[j * rows + i] = phi[i];
    a[j * rows + n + 1] = -detail::split_sign(ref.split, j, side);
  }
  const std::vector<double> phi0 = detail::basis_row(basis, x0, n);
  for (int i = 0; i <= n; ++i) a[(n + 1) * rows + i] = phi0[i];
  b[n + 1] = 1.0;

  std::vector<double> sol = detail::solve_dense(std::move(a), std::move(b));
  const double h = sol[n + 1];
  sol.resize(n + 1);
  return {Polynomial(basis, std::move(sol)), h};
}

/// Levelled system for the monic problem: p(x_j) = tau_j h with
/// tau_j = (-1)^{n+1-j} and the leading coefficient pinned to make p monic.
inline std::pair<Polynomial, double> chebyshev_reference_solve(
    const ChebBasis& basis, const ReferenceSet& ref, int n) {
  if (n < 1) throw InvalidInput("chebyshev_reference_solve: n must be >= 1");
  if (static_cast<int>(ref.points.size()) != n + 1)
    throw InvalidInput("chebyshev_reference_solve: reference needs n + 1 points");
  const double w = basis.hi - basis.lo;
  // Monic leading coefficient in the hull chart: c_n 2^{n-1} (2/w)^n = 1.
  const double cn = std::pow(0.25 * w, n) * 2.0;

  const int rows = n + 1;  // unknowns c_0 .. c_{n-1}, h
  std::vector<double> a(static_cast<std::size_t>(rows) * rows, 0.0);
  std::vector<double> b(rows, 0.0);
  for (int j = 0; j <= n; ++j) {
    const std::vector<double> phi = detail::basis_row(basis, ref.points[j], n);
    for (int i = 0; i < n; ++i) a[j * rows + i] = phi[i];
    a[j * rows + n] = ((n - j) % 2 == 0) ? -1.0 : 1.0;
    b[j] = -cn * phi[n];
  }
  std::vector<double> sol = detail::solve_dense(std::move(a), std::move(b));
  const double h = sol[n];
  sol[n] = cn;
  return {Polynomial(basis, std::move(sol)), h};
}

/// All candidate extrema of |p| on the set: band endpoints plus interior
/// critical points, as (x, p(x)) pairs in increasing x.
inline std::vector<std::pair<double, double>> extrema_candidates(
    const RealSet& set, const Polynomial& p) {
  std::vector<std::pair<double, double>> out;
  const Polynomial dp = p.derivative();
  for (const Interval& band : set.intervals) {
    out.emplace_back(band.lo, p(band.lo));
    if (dp.degree() >= 1) {
      const double edge = 1e-12 * std::max(1.0, band.length());
      for (double r : real_roots(dp, band.lo, band.hi))
        if (r > band.lo + edge && r < band.hi - edge) out.emplace_back(r, p(r));
    }
    out.emplace_back(band.hi, p(band.hi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

struct Selection {
  ReferenceSet ref;
  bool parity_ok{true};
};

inline bool parity_ok_seq(const std::vector<std::pair<double, double>>& seq,
                          double x0, bool cheb_mode) {
  if (seq.empty()) return false;
  if (cheb_mode) return seq.back().second > 0.0;
  int k = 0;
  for (const auto& [x, q] : seq)
    if (x < x0) ++k;
  const double want = (k % 2 == 0) ? 1.0 : -1.0;
  return (seq.front().second > 0.0) == (want > 0.0);
}

/// Classical multi-point exchange selection on q = sgn(x - x0) p(x): one
/// representative per same-sign run (largest |q|, ties to the left), trimmed
/// from the ends to n + 1 points while protecting the global maximum, pinned
/// points, and the split parity of the alternation pattern.
inline std::optional<Selection> select_reference(
    const std::vector<std::pair<double, double>>& cands, double x0, int n,
    const std::vector<double>& pinned, bool cheb_mode) {
  double qmax = 0.0;
  for (const auto& [x, v] : cands) qmax = std::max(qmax, std::abs(v));
  if (qmax == 0.0) return std::nullopt;

  auto is_pinned = [&](double x) {
    for (double pp : pinned)
      if (std::abs(x - pp) <= 1e-12 * std::max(1.0, std::abs(pp))) return true;
    return false;
  };

  for (double drop_tol : {1e-13 * qmax, 0.0}) {
    // (x, q) stream with the x0 sign flip applied.
    std::vector<std::pair<double, double>> pts;
    std::vector<bool> pin;
    for (const auto& [x, v] : cands) {
      const double q = (!cheb_mode && x < x0) ? -v : v;
      if (std::abs(q) <= drop_tol) continue;
      pts.emplace_back(x, q);
      pin.push_back(is_pinned(x));
    }
    if (pts.empty()) continue;

    std::size_t gidx = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (std::abs(pts[i].second) > std::abs(pts[gidx].second)) gidx = i;

    // One representative per maximal same-sign run.
    std::vector<std::pair<double, double>> seq;
    std::vector<bool> seq_pin;
    std::size_t i = 0;
    while (i < pts.size()) {
      std::size_t j = i;
      std::size_t best = i;
      bool has_gmax = (gidx == i);
      while (j + 1 < pts.size() &&
             (pts[j + 1].second > 0) == (pts[i].second > 0)) {
        ++j;
        if (gidx == j) has_gmax = true;
        if (std::abs(pts[j].second) > std::abs(pts[best].second)) best = j;
      }
      std::size_t rep = best;
      if (!has_gmax) {
        for (std::size_t t = i; t <= j; ++t)
          if (pin[t]) {
            rep = t;
            break;
          }
      }
      seq.push_back(pts[rep]);
      seq_pin.push_back(pin[rep]);
      i = j + 1;
    }
    if (static_cast<int>(seq.size()) < n + 1) continue;

    std::size_t gseq = 0;
    for (std::size_t t = 1; t < seq.size(); ++t)
      if (std::abs(seq[t].second) > std::abs(seq[gseq].second)) gseq = t;

    while (static_cast<int>(seq.size()) > n + 1) {
      auto protected_end = [&](bool front) {
        const std::size_t idx = front ? 0 : seq.size() - 1;
        if (seq_pin[idx]) return true;
        return front ? (gseq == 0) : (gseq == seq.size() - 1);
      };
      auto try_drop = [&](bool front) {
        if (protected_end(front)) return false;
        std::vector<std::pair<double, double>> probe = seq;
        if (front)
          probe.erase(probe.begin());
        else
          probe.pop_back();
        if (static_cast<int>(probe.size()) > n + 1 ||
            parity_ok_seq(probe, x0, cheb_mode)) {
          if (front) {
            seq.erase(seq.begin());
            seq_pin.erase(seq_pin.begin());
            if (gseq > 0) --gseq;
          } else {
            seq.pop_back();
            seq_pin.pop_back();
          }
          return true;
        }
        return false;
      };
      const bool front_smaller =
          std::abs(seq.front().second) < std::abs(seq.back().second);
      if (try_drop(front_smaller)) continue;
      if (try_drop(!front_smaller)) continue;
      // Parity cannot be preserved; drop the smaller unprotected end anyway.
      bool dropped = false;
      for (bool front : {front_smaller, !front_smaller}) {
        if (protected_end(front)) continue;
        if (front) {
          seq.erase(seq.begin());
          seq_pin.erase(seq_pin.begin());
          if (gseq > 0) --gseq;
        } else {
          seq.pop_back();
          seq_pin.pop_back();
        }
        dropped = true;
        break;
      }
      if (!dropped) {
        seq.erase(seq.begin());
        seq_pin.erase(seq_pin.begin());
        if (gseq > 0) --gseq;
      }
    }

    Selection sel;
    sel.parity_ok = parity_ok_seq(seq, x0, cheb_mode);
    sel.ref.points.reserve(seq.size());
    int k = 0;
    for (const auto& [x, q] : seq) {
      sel.ref.points.push_back(x);
      if (!cheb_mode && x < x0) ++k;
    }
    sel.ref.split = cheb_mode ? 0 : k;
    return sel;
  }
  return std::nullopt;
}

}  // namespace detail

/// One exchange step: recomputes the extremal candidates of p on the set and
/// selects the next reference. Gap-edge pinning is inferred from the current
/// reference. At an optimal reference this is a fixed point.
inline ReferenceSet exchange(const RealSet& set, const Polynomial& p,
                             const ReferenceSet& current, double x0) {
  const int n = static_cast<int>(current.points.size()) - 1;
  const auto cands = extrema_candidates(set, p);
  std::vector<double> pinned;
  const NormalizedProblem prob = locate(set, x0);
  if (prob.gap_index && current.split > 1 && current.split < n) {
    const double alpha = set.intervals[*prob.gap_index].hi;
    const double beta = set.intervals[*prob.gap_index + 1].lo;
    for (double edge : {alpha, beta}) {
      const bool present =
          std::any_of(current.points.begin(), current.points.end(),
                      [&](double x) {
                        return std::abs(x - edge) <=
                               1e-12 * std::max(1.0, std::abs(edge));
                      });
      // A gap edge participates with levelled value +h, so p must be
      // positive there for the pin to make sense.
      if (present && p(edge) > 0.0) pinned.push_back(edge);
    }
  }
  auto sel = detail::select_reference(cands, x0, n, pinned, false);
  if (!sel)
    throw NumericalFailure("exchange: too few extrema for a full reference");
  return sel->ref;
}

namespace detail {

/// Distributes n + 1 starting points over the bands proportionally to their
/// lengths (largest remainder), cosine-spaced inside each band. When x0 sits
/// in a bounded gap, both sides receive at least one point if possible.
inline ReferenceSet initial_reference(const RealSet& set, int count,
                                      std::optional<double> x0) {
  const std::size_t m = set.components();
  double total = 0.0;
  for (const Interval& iv : set.intervals) total += iv.length();
  std::vector<int> alloc(m, 0);
  std::vector<std::pair<double, std::size_t>> frac;
  int assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double share = count * set.intervals[i].length() / total;
    alloc[i] = static_cast<int>(share);
    assigned += alloc[i];
    frac.emplace_back(-(share - alloc[i]), i);
  }
  std::sort(frac.begin(), frac.end());
  for (int r = 0; r < count - assigned; ++r) ++alloc[frac[r % m].second];

  if (x0) {
    auto side_total = [&](bool left) {
      int s = 0;
      for (std::size_t i = 0; i < m; ++i)
        if ((set.intervals[i].hi < *x0) == left) s += alloc[i];
      return s;
    };
    for (bool left : {true, false}) {
      bool side_exists = false;
      std::size_t best_band = 0;
      double best_len = -1.0;
      for (std::size_t i = 0; i < m; ++i)
        if ((set.intervals[i].hi < *x0) == left) {
          side_exists = true;
          if (set.intervals[i].length() > best_len) {
            best_len = set.intervals[i].length();
            best_band = i;
          }
        }
      if (!side_exists || side_total(left) > 0) continue;
      std::size_t donor = 0;
      for (std::size_t i = 1; i < m; ++i)
        if (alloc[i] > alloc[donor]) donor = i;
      if (alloc[donor] > 1) {
        --alloc[donor];
        ++alloc[best_band];
      }
    }
  }

  ReferenceSet ref;
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < m; ++i) {
    const Interval& band = set.intervals[i];
    const int c = alloc[i];
    if (c == 1) {
      ref.points.push_back(band.mid());
    } else {
      for (int j = 0; j < c; ++j)
        ref.points.push_back(band.mid() -
                             band.halfwidth() * std::cos(pi * j / (c - 1)));
    }
  }
  std::sort(ref.points.begin(), ref.points.end());
  if (x0)
    ref.split = static_cast<int>(std::count_if(
        ref.points.begin(), ref.points.end(), [&](double x) { return x < *x0; }));
  return ref;
}

inline std::pair<Polynomial, double> solve_with_retry(
    const ChebBasis& basis, ReferenceSet ref, std::optional<double> x0, int n) {
  for (int attempt = 0;; ++attempt) {
    try {
      return x0 ? reference_solve(basis, ref, *x0, n)
                : chebyshev_reference_solve(basis, ref, n);
    } catch (const NumericalFailure&) {
      if (attempt >= 3) throw;
      // Degenerate reference: nudge points deterministically and retry.
      const double eps = 1e-9 * (basis.hi - basis.lo) * (attempt + 1);
      for (std::size_t j = 0; j < ref.points.size(); ++j) {
        const double frac = (j * 0.6180339887498949) -
                            std::floor(j * 0.6180339887498949);
        ref.points[j] += eps * (frac - 0.5);
      }
      std::sort(ref.points.begin(), ref.points.end());
    }
  }
}

}  // namespace detail

/// Minimal sup-norm monic polynomial of degree n on the set, by the classical
/// multi-point exchange iteration.
inline ChebyshevSolution chebyshev(const RealSet& set, int n,
                                   const SolverOptions& opts = {}) {
  if (n < 1) throw InvalidInput("chebyshev: n must be >= 1");
  if (opts.max_iterations < 1)
    throw InvalidInput("chebyshev: max_iterations must be >= 1");
  const ChebBasis basis{set.hull_lo(), set.hull_hi()};
  ReferenceSet ref = detail::initial_reference(set, n + 1, std::nullopt);

  ChebyshevSolution best;
  double best_defect = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    auto [p, h] = detail::solve_with_retry(basis, ref, std::nullopt, n);
    const auto cands = extrema_candidates(set, p);
    double m = 0.0;
    for (const auto& [x, v] : cands) m = std::max(m, std::abs(v));
    const double defect = std::max(0.0, (m - std::abs(h)) / m);
    if (defect < best_defect) {
      best_defect = defect;
      best = {p, m, ref, iter, defect, true};
    }
    if (defect <= opts.tol) return {p, m, ref, iter, defect, true};
    auto sel = detail::select_reference(cands, 0.0, n, {}, true);
    if (!sel) break;
    if (sel->ref.points == ref.points) break;  // stagnation
    ref = sel->ref;
  }
  best.converged = false;
  return best;
}

namespace detail {

/// Attempts the degree-degenerate closed form: the scaled minimal monic
/// polynomial of degree n - 1, certified by an (n+1)-point split-alternating
/// extremal set. Returns nullopt when the certificate cannot be assembled.
inline std::optional<ResidualSolution> try_degenerate(
    const NormalizedProblem& prob, int n, const SolverOptions& opts) {
  const ChebBasis basis{prob.set.hull_lo(), prob.set.hull_hi()};
  Polynomial scaled = Polynomial::constant(basis, 1.0);
  double norm = 1.0;
  double defect = 0.0;
  int iterations = 1;
  if (n >= 2) {
    ChebyshevSolution cheb = chebyshev(prob.set, n - 1, opts);
    if (!cheb.converged) return std::nullopt;
    const double at_x0 = cheb.poly(prob.x0);
    if (std::abs(at_x0) <= cheb.norm) return std::nullopt;
    std::vector<double> c = cheb.poly.coeffs();
    for (double& v : c) v /= at_x0;
    scaled = Polynomial(basis, std::move(c));
    norm = cheb.norm / std::abs(at_x0);
    defect = cheb.levelling_defect;
    iterations = cheb.iterations;
  }

  auto cands = extrema_candidates(prob.set, scaled);
  std::vector<std::pair<double, double>> extremal;
  for (const auto& [x, v] : cands)
    if (std::abs(v) >= norm * (1.0 - 1e-8)) extremal.emplace_back(x, v);
  auto sel = detail::select_reference(extremal, prob.x0, n, {}, false);
  if (!sel || !sel->parity_ok) return std::nullopt;

  ResidualSolution out;
  out.n = n;
  out.effective_degree = scaled.degree();
  out.poly = scaled;
  out.norm = norm;
  out.reference = sel->ref;
  out.sign_at_top = (scaled(sel->ref.points.back()) >= 0.0) ? 1 : -1;
  out.iterations = iterations;
  out.levelling_defect = defect;
  out.degenerate = true;
  out.converged = true;
  return out;
}

}  // namespace detail

/// Solves the residual problem: minimal sup norm on the set among degree <= n
/// polynomials with p(x0) = 1. Dispatches on the position of x0 (scaled
/// minimal monic polynomial when x0 lies beyond the hull, split-alternation
/// exchange when x0 sits in a bounded gap) and certifies the result by its
/// reference. Non-convergence is reported through the `converged` flag with
/// the best iterate retained.
inline ResidualSolution solve_residual(const NormalizedProblem& prob, int n,
                                       const SolverOptions& opts = {}) {
  if (n < 0) throw InvalidInput("solve_residual: n must be >= 0");
  if (opts.max_iterations < 1)
    throw InvalidInput("solve_residual: max_iterations must be >= 1");
  const RealSet& set = prob.set;
  const ChebBasis basis{set.hull_lo(), set.hull_hi()};

  ResidualSolution out;
  out.n = n;
  if (n == 0) {
    out.effective_degree = 0;
    out.poly = Polynomial::constant(basis, 1.0);
    out.norm = 1.0;
    out.reference.points = {set.hull_lo()};
    out.reference.split = set.hull_lo() < prob.x0 ? 1 : 0;
    out.sign_at_top = 1;
    out.iterations = 0;
    return out;
  }

  if (!prob.gap_index) {
    // x0 beyond the hull: the solution is the scaled minimal monic polynomial.
    ChebyshevSolution cheb = chebyshev(set, n, opts);
    const double at_x0 = cheb.poly(prob.x0);
    std::vector<double> c = cheb.poly.coeffs();
    for (double& v : c) v /= at_x0;
    out.poly = Polynomial(basis, std::move(c));
    out.norm = cheb.norm / std::abs(at_x0);
    out.effective_degree = out.poly.degree();
    out.reference = cheb.reference;
    out.reference.split = (prob.x0 < set.hull_lo()) ? 0 : n + 1;
    out.sign_at_top = (out.poly(out.reference.points.back()) >= 0.0) ? 1 : -1;
    out.iterations = cheb.iterations;
    out.levelling_defect = cheb.levelling_defect;
    out.converged = cheb.converged;
    if (!cheb.converged) out.diagnostic = "monic subproblem did not converge";
    if (out.effective_degree < n - 1)
      throw InvariantViolation("solve_residual: degree dropped below n - 1");
    return out;
  }

  const double alpha = set.intervals[*prob.gap_index].hi;
  const double beta = set.intervals[*prob.gap_index + 1].lo;
  ReferenceSet ref = detail::initial_reference(set, n + 1, prob.x0);
  bool pin_alpha = false, pin_beta = false;

  Polynomial best_poly;
  ReferenceSet best_ref;
  double best_defect = std::numeric_limits<double>::infinity();
  double best_norm = 1.0;
  bool solved = false;
  int stall = 0;
  double last_defect = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    auto [p, h] = detail::solve_with_retry(basis, ref, prob.x0, n);
    const auto cands = extrema_candidates(set, p);
    double m = 0.0;
    for (const auto& [x, v] : cands) m = std::max(m, std::abs(v));
    const double defect = std::max(0.0, (m - std::abs(h)) / m);

    if (defect < best_defect) {
      best_defect = defect;
      best_poly = p;
      best_ref = ref;
      best_norm = m;
    }

    if (defect <= opts.tol) {
      out.poly = p;
      out.norm = m;
      out.reference = ref;
      out.iterations = iter;
      out.levelling_defect = defect;
      solved = true;
      break;
    }

    if (defect > 0.5 * last_defect) {
      if (++stall >= 8) {
        auto deg = detail::try_degenerate(prob, n, opts);
        if (deg) return *deg;
        stall = 0;
      }
    } else {
      stall = 0;
    }
    last_defect = defect;

    std::vector<double> pinned;
    if (ref.split > 1 && ref.split < n) {
      if (pin_alpha && p(alpha) > 0.0) pinned.push_back(alpha);
      if (pin_beta && p(beta) > 0.0) pinned.push_back(beta);
    }
    auto sel = detail::select_reference(cands, prob.x0, n, pinned, false);
    if (!sel) {
      auto deg = detail::try_degenerate(prob, n, opts);
      if (deg) return *deg;
      out.poly = best_poly;
      out.norm = best_norm;
      out.reference = best_ref;
      out.iterations = iter;
      out.levelling_defect = best_defect;
      out.converged = false;
      out.diagnostic = "exchange ran out of extremal candidates";
      out.effective_degree = best_poly.degree();
      return out;
    }
    for (double x : sel->ref.points) {
      if (std::abs(x - alpha) <= 1e-12 * std::max(1.0, std::abs(alpha)))
        pin_alpha = true;
      if (std::abs(x - beta) <= 1e-12 * std::max(1.0, std::abs(beta)))
        pin_beta = true;
    }
    if (sel->ref.points == ref.points && defect > opts.tol) {
      auto deg = detail::try_degenerate(prob, n, opts);
      if (deg) return *deg;
    }
    ref = sel->ref;
  }

  if (!solved) {
    // Iteration budget exhausted: report the best iterate.
    out.poly = best_poly;
    out.norm = best_norm;
    out.reference = best_ref;
    out.iterations = opts.max_iterations;
    out.levelling_defect = best_defect;
    out.converged = false;
    out.diagnostic = "iteration budget exhausted (best iterate reported)";
  }

  out.effective_degree = out.poly.degree();
  if (out.converged && out.effective_degree <= n - 1) {
    // Trailing coefficient collapsed: produce the clean degenerate form.
    auto deg = detail::try_degenerate(prob, n, opts);
    if (deg) {
      deg->iterations = out.iterations;
      return *deg;
    }
  }
  if (out.converged && out.effective_degree < n - 1)
    throw InvariantViolation("solve_residual: degree dropped below n - 1");
  out.degenerate = (out.effective_degree == n - 1);
  out.sign_at_top = (out.poly(out.reference.points.back()) >= 0.0) ? 1 : -1;
  if (out.converged && out.norm > 1.0 + 1e-9)
    throw InvariantViolation("solve_residual: norm exceeds 1");
  return out;
}

/// The dual normalization: the same extremal polynomial scaled to sup norm 1,
/// whose value at x0 is then maximal and equals 1/r.
inline std::pair<Polynomial, double> dual_residual(const ResidualSolution& sol) {
  std::vector<double> c = sol.poly.coeffs();
  for (double& v : c) v /= sol.norm;
  return {Polynomial(sol.poly.basis(), std::move(c)), 1.0 / sol.norm};
}

/// Degree report: the effective degree plus, in the degenerate case, a check
/// that the solution coincides with the scaled minimal monic polynomial of
/// degree n - 1.
struct DegreeReport {
  int effective_degree{0};
  bool degenerate{false};
  bool chebyshev_match{true};
  double match_defect{0.0};
};

inline DegreeReport degree_report(const NormalizedProblem& prob,
                                  const ResidualSolution& sol,
                                  const SolverOptions& opts = {}) {
  DegreeReport rep;
  rep.effective_degree = sol.effective_degree;
  rep.degenerate = (sol.effective_degree == sol.n - 1);
  if (sol.effective_degree < sol.n - 1)
    throw InvariantViolation("degree_report: degree below n - 1");
  if (!rep.degenerate || sol.n == 0) return rep;

  const ChebBasis& basis = sol.poly.basis();
  Polynomial target = Polynomial::constant(basis, 1.0);
  if (sol.n >= 2) {
    ChebyshevSolution cheb = chebyshev(prob.set, sol.n - 1, opts);
    std::vector<double> c = cheb.poly.coeffs();
    const double at_x0 = cheb.poly(prob.x0);
    for (double& v : c) v /= at_x0;
    target = Polynomial(basis, std::move(c));
  }
  double dev = 0.0;
  for (const Interval& band : prob.set.intervals) {
    for (int j = 0; j <= 64; ++j) {
      const double x = band.lo + band.length() * j / 64.0;
      dev = std::max(dev, std::abs(sol.poly(x) - target(x)));
    }
  }
  rep.match_defect = dev / std::max(1.0, sol.norm);
  rep.chebyshev_match = rep.match_defect <= 1e-9;
  return rep;
}

}  // namespace respoly
