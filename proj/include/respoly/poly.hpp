#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "respoly/errors.hpp"

namespace respoly {

/// Relative threshold below which trailing coefficients do not count toward
/// the numerical degree.
inline constexpr double kDegreeDropTol = 1e-10;

/// First-kind Chebyshev value C_n(x) by the three-term recurrence; valid on
/// and off [-1, 1].
inline double chebyshev_first_kind(int n, double x) {
  if (n < 0) throw InvalidInput("chebyshev_first_kind: negative degree");
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = 2.0 * x * p1 - p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Affine chart mapping the hull [lo, hi] onto [-1, 1].
struct ChebBasis {
  double lo{-1.0};
  double hi{1.0};

  [[nodiscard]] double to_unit(double x) const {
    return (2.0 * x - lo - hi) / (hi - lo);
  }
  [[nodiscard]] std::complex<double> to_unit(std::complex<double> z) const {
    return (2.0 * z - lo - hi) / (hi - lo);
  }
  [[nodiscard]] double from_unit(double u) const {
    return 0.5 * ((hi - lo) * u + lo + hi);
  }
};

/// Polynomial stored as first-kind Chebyshev coefficients over a hull chart.
/// Coefficients use the plain convention p = sum c_k C_k(u), no halving.
class Polynomial {
 public:
  Polynomial() : coeffs_(1, 0.0) {}
  Polynomial(ChebBasis basis, std::vector<double> coeffs)
      : basis_(basis), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.assign(1, 0.0);
    if (!(basis_.lo < basis_.hi))
      throw InvalidInput("Polynomial: basis needs lo < hi");
  }

  static Polynomial constant(ChebBasis basis, double value) {
    return Polynomial(basis, {value});
  }

  [[nodiscard]] const ChebBasis& basis() const { return basis_; }
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }

  [[nodiscard]] double max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Numerical degree: index of the last coefficient above the drop
  /// threshold relative to the largest coefficient.
  [[nodiscard]] int degree(double rel_tol = kDegreeDropTol) const {
    const double cut = rel_tol * max_abs_coeff();
    for (std::size_t k = coeffs_.size(); k-- > 0;)
      if (std::abs(coeffs_[k]) > cut) return static_cast<int>(k);
    return 0;
  }

  [[nodiscard]] double operator()(double x) const { return clenshaw(basis_.to_unit(x)); }
  [[nodiscard]] std::complex<double> operator()(std::complex<double> z) const {
    return clenshaw(basis_.to_unit(z));
  }

  /// Derivative in the same basis, via the standard coefficient recurrence
  /// plus the chart chain factor.
  [[nodiscard]] Polynomial derivative() const {
    const int d = degree();
    std::vector<double> out(std::max(d, 1), 0.0);
    if (d >= 1) {
      std::vector<double> dk(d + 2, 0.0);
      for (int k = d; k >= 1; --k) dk[k - 1] = dk[k + 1] + 2.0 * k * coeffs_[k];
      dk[0] *= 0.5;
      const double chain = 2.0 / (basis_.hi - basis_.lo);
      for (int k = 0; k < d; ++k) out[k] = dk[k] * chain;
    }
    return Polynomial(basis_, std::move(out));
  }

 private:
  template <class T>
  [[nodiscard]] T clenshaw(T u) const {
    T b1{}, b2{};
    for (std::size_t k = coeffs_.size(); k-- > 1;) {
      const T b = coeffs_[k] + 2.0 * u * b1 - b2;
      b2 = b1;
      b1 = b;
    }
    return coeffs_[0] + u * b1 - b2;
  }

  ChebBasis basis_{};
  std::vector<double> coeffs_;
};

namespace detail {

/// In-place Taylor shift: given coefficients of p in powers of x, returns
/// coefficients of p(x + t).
inline void taylor_shift(std::vector<double>& a, double t) {
  const std::size_t d = a.size();
  if (d < 2 || t == 0.0) return;
  for (std::size_t i = 0; i + 1 < d; ++i)
    for (std::size_t j = d - 1; j-- > i;) a[j] += t * a[j + 1];
}

}  // namespace detail

/// Converts monomial coefficients (powers of x) to the Chebyshev basis of
/// the given hull chart.
inline Polynomial from_monomial(ChebBasis basis,
                                std::vector<double> mono) {
  if (mono.empty()) mono.assign(1, 0.0);
  const double c = 0.5 * (basis.lo + basis.hi);
  const double h = 0.5 * (basis.hi - basis.lo);
  detail::taylor_shift(mono, c);  // now coefficients of p(c + y) in y
  std::vector<double> out(mono.size(), 0.0);
  std::vector<double> rep{1.0};  // Chebyshev coefficients of u^k
  double hk = 1.0;
  for (std::size_t k = 0; k < mono.size(); ++k) {
    const double a = mono[k] * hk;
    for (std::size_t j = 0; j < rep.size(); ++j) out[j] += a * rep[j];
    hk *= h;
    if (k + 1 < mono.size()) {
      std::vector<double> next(rep.size() + 1, 0.0);
      next[1] += rep[0];
      for (std::size_t j = 1; j < rep.size(); ++j) {
        next[j + 1] += 0.5 * rep[j];
        next[j - 1] += 0.5 * rep[j];
      }
      rep = std::move(next);
    }
  }
  return Polynomial(basis, std::move(out));
}

/// Expands a Chebyshev-basis polynomial into monomial coefficients (powers
/// of x). Stable only for moderate degrees; intended for tests and small
/// conversions.
inline std::vector<double> to_monomial(const Polynomial& p) {
  const std::vector<double>& c = p.coeffs();
  std::vector<double> acc(c.size(), 0.0);
  std::vector<double> tkm1{1.0}, tk{0.0, 1.0};
  acc[0] += c[0];
  if (c.size() > 1) {
    for (std::size_t j = 0; j < tk.size(); ++j) acc[j] += c[1] * tk[j];
    for (std::size_t k = 2; k < c.size(); ++k) {
      std::vector<double> t(k + 1, 0.0);
      for (std::size_t j = 0; j < tk.size(); ++j) t[j + 1] += 2.0 * tk[j];
      for (std::size_t j = 0; j < tkm1.size(); ++j) t[j] -= tkm1[j];
      for (std::size_t j = 0; j < t.size(); ++j) acc[j] += c[k] * t[j];
      tkm1 = std::move(tk);
      tk = std::move(t);
    }
  }
  const double ctr = 0.5 * (p.basis().lo + p.basis().hi);
  const double h = 0.5 * (p.basis().hi - p.basis().lo);
  double hk = 1.0;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    acc[k] /= hk;
    hk *= h;
  }
  detail::taylor_shift(acc, -ctr);  // from powers of (x - ctr) to powers of x
  return acc;
}

namespace detail {

inline double polish_root(const Polynomial& p, const Polynomial& dp,
                          double xa, double xb, double fa, double fb) {
  (void)fb;
  double x = 0.5 * (xa + xb);
  for (int it = 0; it < 200; ++it) {
    const double f = p(x);
    if (f == 0.0) return x;
    if ((f > 0) == (fa > 0)) {
      xa = x;
      fa = f;
    } else {
      xb = x;
    }
    const double d = dp(x);
    double xn = (d != 0.0) ? x - f / d : 0.5 * (xa + xb);
    if (!(xn > xa && xn < xb)) xn = 0.5 * (xa + xb);
    const double dx = std::abs(xn - x);
    x = xn;
    if (dx <= 1e-13 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace detail

/// All real roots of p inside [lo, hi], each isolated by a sign change on an
/// adaptive cosine-spaced grid and polished by safeguarded Newton to 1e-13
/// relative accuracy. Roots are returned sorted and deduplicated.
/// Throws NumericalFailure when the bracket count does not stabilize under
/// refinement, so roots are never dropped silently.
inline std::vector<double> real_roots(const Polynomial& p, double lo,
                                      double hi) {
  if (!(lo < hi)) throw InvalidInput("real_roots: window needs lo < hi");
  const int deg = p.degree();
  if (deg < 1) throw InvalidInput("real_roots: degree must be at least 1");
  const Polynomial dp = p.derivative();
  const double pi = std::numbers::pi;
  const double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);

  auto scan = [&](int n, std::vector<std::pair<double, double>>& brackets,
                  std::vector<double>& exact) {
    brackets.clear();
    exact.clear();
    double xprev = lo, fprev = p(lo);
    if (fprev == 0.0) exact.push_back(lo);
    for (int j = 1; j <= n; ++j) {
      const double x =
          (j == n) ? hi : mid - hw * std::cos(pi * static_cast<double>(j) / n);
      const double f = p(x);
      if (f == 0.0)
        exact.push_back(x);
      else if (fprev != 0.0 && (f > 0) != (fprev > 0))
        brackets.emplace_back(xprev, x);
      xprev = x;
      fprev = f;
    }
  };

  std::vector<std::pair<double, double>> brackets, probe;
  std::vector<double> exact, probe_exact;
  int n = std::max(64, 8 * (deg + 1));
  bool stable = false;
  for (; n <= (1 << 20); n *= 2) {
    scan(n, brackets, exact);
    scan(2 * n, probe, probe_exact);
    if (brackets.size() + exact.size() ==
        probe.size() + probe_exact.size()) {
      brackets.swap(probe);
      exact.swap(probe_exact);
      stable = true;
      break;
    }
  }
  if (!stable)
    throw NumericalFailure(
        "real_roots: bracket count failed to stabilize under grid refinement");

  std::vector<double> roots = exact;
  for (auto [xa, xb] : brackets)
    roots.push_back(detail::polish_root(p, dp, xa, xb, p(xa), p(xb)));
  std::sort(roots.begin(), roots.end());
  const double sep = 4e-13 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  std::vector<double> out;
  for (double r : roots)
    if (out.empty() || r - out.back() > sep) out.push_back(r);
  if (static_cast<int>(out.size()) > deg)
    throw NumericalFailure("real_roots: more sign changes than the degree");
  return out;
}

}  // namespace respoly
