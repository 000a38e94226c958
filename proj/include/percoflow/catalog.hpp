#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "percoflow/parallel.hpp"
#include "percoflow/rng.hpp"
#include "percoflow/stats.hpp"

// Closed-form reference laws used as golden oracles elsewhere: the urn
// scheme whose stopping time reproduces the uniform-radius stationary
// measure, the q-series law that matches the geometric-radius one, and the
// inverse-Beta scaling limit of the power-tail chain.

namespace percoflow::catalog {

// Partial q-Pochhammer products (a;q)_0, ..., (a;q)_k.
struct QPochhammer {
  double a = 0.0;
  double q = 0.0;
  std::vector<double> partials;

  static QPochhammer build(double a, double q, std::size_t k) {
    if (!(q > 0.0 && q < 1.0) || !(a > 0.0 && a < 1.0))
      throw std::invalid_argument("q_pochhammer: need a, q in (0,1)");
    QPochhammer out;
    out.a = a;
    out.q = q;
    out.partials.resize(k + 1);
    out.partials[0] = 1.0;
    double factor = a;  // a q^{j}
    for (std::size_t j = 1; j <= k; ++j) {
      out.partials[j] = out.partials[j - 1] * (1.0 - factor);
      factor *= q;
    }
    return out;
  }
};

// Euler's function phi(p) = (p;p)_infinity, by direct product cut once
// p^k < 1e-16; the dropped factors multiply to 1 - O(1e-16/(1-p)).
inline double euler_phi(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("euler_phi: p in (0,1)");
  double prod = 1.0;
  double pk = p;
  while (pk >= 1e-16) {
    prod *= 1.0 - pk;
    pk *= p;
  }
  return prod;
}

// Exact stopping-time law of the urn scheme: an urn holds m balls, one red;
// each draw that comes up white replaces a white ball by a red one; T is the
// first red draw. P[T = n] = (m-1)! m^{-n} n / (m-n)!, in log space.
inline std::vector<double> urn_stop_pmf(int m) {
  if (m < 2) throw std::invalid_argument("urn_stop_pmf: need m >= 2");
  std::vector<double> pmf(static_cast<std::size_t>(m) + 1, 0.0);  // index = n
  for (int n = 1; n <= m; ++n) {
    const double lp = std::lgamma(static_cast<double>(m)) -
                      static_cast<double>(n) * std::log(static_cast<double>(m)) +
                      std::log(static_cast<double>(n)) -
                      std::lgamma(static_cast<double>(m - n) + 1.0);
    pmf[static_cast<std::size_t>(n)] = std::exp(lp);
  }
  return pmf;
}

struct UrnResult {
  int m = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> histogram;   // histogram[j] = trials with m-T = j
  std::vector<double> empirical;          // histogram / trials
  std::vector<double> exact;              // exact law of m-T
  double tv_distance = 0.0;               // empirical vs exact
  std::vector<std::uint8_t> per_trial;    // m-T per trial (m <= 255 stored raw)
};

// Simulates the urn and tallies m - T (the draws *not* needed).
inline UrnResult naor_urn(int m, std::uint64_t trials, std::uint64_t seed,
                          int workers = 1) {
  if (m < 2 || m > 255)
    throw std::invalid_argument("naor_urn: need 2 <= m <= 255");
  UrnResult out;
  out.m = m;
  out.trials = trials;
  out.per_trial.assign(trials, 0);
  const std::uint64_t master = rng::derive(seed, rng::tag("percoflow.urn"));
  parallel::run_trials(trials, workers, [&](std::size_t t) {
    rng::CounterRng gen(rng::derive(master, static_cast<std::uint64_t>(t)));
    int reds = 1;
    int stop = m;  // T is at most m: with all balls red the next draw is red
    for (int n = 1; n <= m; ++n) {
      if (gen.next_unit() * m < static_cast<double>(reds)) {
        stop = n;
        break;
      }
      ++reds;
    }
    out.per_trial[t] = static_cast<std::uint8_t>(m - stop);
  });
  out.histogram.assign(static_cast<std::size_t>(m), 0);
  for (std::uint64_t t = 0; t < trials; ++t) ++out.histogram[out.per_trial[t]];
  out.empirical.resize(static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < out.empirical.size(); ++j)
    out.empirical[j] =
        static_cast<double>(out.histogram[j]) / static_cast<double>(trials);
  const std::vector<double> stop_pmf = urn_stop_pmf(m);
  out.exact.resize(static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < out.exact.size(); ++j)
    out.exact[j] = stop_pmf[static_cast<std::size_t>(m) - j];
  out.tv_distance = stats::total_variation(out.empirical, out.exact);
  return out;
}

struct EulerLaw {
  double p = 0.0;
  double tau0 = 0.0;                // 1 / sum of the computed range
  std::vector<double> tau;          // normalized tau_0..tau_K
  double identity_residual = 0.0;   // |phi(p) * sum - 1|
};

// The law tau_n proportional to p^n / (p;p)_n. The normalizer is the
// q-binomial sum, whose closed value is 1/phi(p); the residual of that
// identity is reported. K must be large enough that the dropped tail is
// below 1e-10 of the mass, certified by a geometric bound on the term ratio.
inline EulerLaw euler_distribution(double p, std::size_t K) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("euler_distribution: p in (0,1)");
  EulerLaw law;
  law.p = p;
  std::vector<double> raw(K + 1);
  raw[0] = 1.0;
  double pn = 1.0;  // p^n
  double sum = 1.0;
  for (std::size_t n = 1; n <= K; ++n) {
    pn *= p;
    // raw_n = raw_{n-1} * p / (1 - p^n)
    raw[n] = raw[n - 1] * p / (1.0 - pn);
    sum += raw[n];
  }
  // Tail certificate: for n > K the term ratio is at most p / (1 - p^{K+1}).
  const double ratio = p / (1.0 - pn * p);
  if (!(ratio < 1.0) || raw[K] * ratio / (1.0 - ratio) > 1e-10 * sum)
    throw std::invalid_argument(
        "euler_distribution: K too small to certify the truncated mass");
  law.tau0 = 1.0 / sum;
  law.tau.resize(K + 1);
  for (std::size_t n = 0; n <= K; ++n) law.tau[n] = raw[n] / sum;
  law.identity_residual = std::fabs(euler_phi(p) * sum - 1.0);
  return law;
}

// Limit law of X_n / n under the c/n radius tail: P[limit <= y] = (y/(1+y))^c.
inline double inverse_beta_cdf(double c, double y) {
  if (!(c > 0.0) || !(y > 0.0))
    throw std::invalid_argument("inverse_beta_cdf: need c, y > 0");
  return std::pow(y / (1.0 + y), c);
}

}  // namespace percoflow::catalog
