#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

// Shared numerical kernels: stable log-space helpers, the regularized
// incomplete gamma function (for chi-square tail areas), bisection, and a
// power-iteration Perron root for nonnegative matrices.

namespace percoflow::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown when an iterative routine fails to meet its tolerance.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double estimate, double resid)
      : std::runtime_error(what), last_estimate(estimate), residual(resid) {}
  double last_estimate;
  double residual;
};

// log(exp(a) + exp(b)) without overflow; tolerates -inf arguments.
inline double log_sum_exp(double a, double b) noexcept {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

namespace detail {

// Lower regularized incomplete gamma P(a, x) by series, for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction (modified
// Lentz), for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Upper regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

// Survival function of the chi-square distribution with dof degrees of
// freedom, P[X > x].
inline double chi_square_sf(double x, double dof) {
  if (dof <= 0.0) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

// Bisection on [lo, hi]; requires a sign change. Returns the midpoint once
// the bracket width drops below xtol.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect: no sign change on bracket");
  for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Dominant eigenvalue of a nonnegative square matrix (row-major, n x n) by
// power iteration with L1 normalization. Convergence is measured on the
// Rayleigh quotient; throws ConvergenceError if it stalls.
inline double perron_root(const std::vector<double>& a, std::size_t n,
                          double tol, std::size_t max_iter = 200000) {
  if (n == 0) throw std::invalid_argument("perron_root: empty matrix");
  if (a.size() != n * n) throw std::invalid_argument("perron_root: size mismatch");
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> w(n, 0.0);
  double rq_prev = kInf;
  for (std::size_t it = 0; it < max_iter; ++it) {
    double vav = 0.0;
    double vv = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      const double* row = a.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * v[j];
      w[i] = s;
      vav += v[i] * s;
      vv += v[i] * v[i];
      norm += s;
    }
    if (norm == 0.0) return 0.0;  // v reached the kernel; spectral radius 0
    const double rq = vav / vv;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    if (it > 8 && std::fabs(rq - rq_prev) < tol) return rq;
    rq_prev = rq;
  }
  throw ConvergenceError("perron_root: power iteration did not settle",
                         rq_prev, tol);
}

// log C(n, k) for nonnegative integer arguments.
inline double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return -kInf;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace percoflow::numerics
