#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "percoflow/dist.hpp"
#include "percoflow/exchange.hpp"
#include "percoflow/graphs.hpp"
#include "percoflow/numerics.hpp"
#include "percoflow/parallel.hpp"
#include "percoflow/rng.hpp"
#include "percoflow/stats.hpp"

// Monte Carlo covering on windows and the analytic uncovered-set sequences.
//
// Every vertex x draws an independent radius Y_x and covers the open
// out-ball of that radius. Coverage is decided by one ascending sweep that
// propagates the remaining reach
//
//   R(y) = max(Y_y, max over in-neighbours x of (R(x) - 1)),
//
// so y is covered iff R(y) > 0; by induction R(y) = max over in-coverers of
// (Y_x - d(x, y)) clipped at Y_y >= 0, which is the ball definition. The
// sweep costs O(|window| * dim) instead of touching every ball member.
//
// On the half lattice and the tree every potential coverer of a window
// vertex lies inside the window, so decisions are exact. Full-lattice
// windows carry a margin; statistics are read off the core and
// z_truncation_bound bounds the probability that anything outside the
// window could have covered a core vertex.

namespace percoflow::percolation {

using graphs::VertexId;
using graphs::Window;

enum class CoverageVerdict { CoveredAlmostSurely, NotCoveredAlmostSurely };

inline const char* to_string(CoverageVerdict v) {
  return v == CoverageVerdict::CoveredAlmostSurely ? "covered-a.s."
                                                   : "not-covered-a.s.";
}

// Whether Z^n is covered almost surely under the spec: exactly when the
// n-th moment of the radius law diverges.
inline CoverageVerdict coverage_criterion(const dist::DistributionSpec& spec,
                                          int dim) {
  if (dim < 1) throw std::invalid_argument("coverage_criterion: need dim >= 1");
  return dist::moment_diverges(spec, dim)
             ? CoverageVerdict::CoveredAlmostSurely
             : CoverageVerdict::NotCoveredAlmostSurely;
}

// Raised when a full-lattice window cannot produce meaningful samples
// because the truncation error bound is infinite; carries the analytic
// verdict that replaces simulation.
struct WindowRefused : std::runtime_error {
  WindowRefused(const std::string& what, CoverageVerdict v)
      : std::runtime_error(what), verdict(v) {}
  CoverageVerdict verdict;
};

// Upper bound on P[some vertex outside the window covers some core vertex]
// for a full-lattice window: sum over distances k >= margin of
// N_n(k) * T(k-1), where N_n(k) = C(k+n-1, n-1) counts the lattice points
// at directed distance k. Infinite exactly in the moment-divergence regime,
// where windowing is meaningless because coverage is a.s. total.
inline double z_truncation_bound(const Window& w,
                                 const dist::DistributionSpec& spec) {
  if (w.family() != graphs::Family::FullLattice)
    throw std::invalid_argument("z_truncation_bound: full-lattice windows only");
  const int n = w.dim();
  if (dist::moment_diverges(spec, n)) return numerics::kInf;
  const std::int64_t k0 = -w.low();  // the margin
  // Run the binomial coefficient multiplicatively from its log at k0.
  double log_n_k = numerics::log_binomial(k0 + n - 1, n - 1);
  double acc = 0.0;
  for (std::int64_t k = k0;; ++k) {
    if (k > k0) {
      log_n_k += std::log(static_cast<double>(k + n - 1)) -
                 std::log(static_cast<double>(k));
    }
    const double term = std::exp(log_n_k) * spec.tail(k - 1);
    acc += term;
    if (term < 1e-18 * (acc + 1e-300) && k > k0 + 64) break;
    if (k > k0 + 100000000)
      throw numerics::ConvergenceError("z_truncation_bound: slow tail", acc, term);
  }
  return acc;
}

struct CoverSample {
  Window window;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> y;       // radius per vertex id
  std::vector<std::uint8_t> covered; // 1 iff the vertex lies in some ball
  std::uint64_t covered_count = 0;
};

namespace detail {

inline std::uint64_t vertex_stream(std::uint64_t seed) {
  return rng::derive(seed, rng::tag("percoflow.cover.y"));
}

// Ascending-id reach sweep. Returns the covered count; writes flags into
// covered (resized) when given.
template <class YAt>
std::uint64_t sweep(const Window& w, YAt&& y_at, std::vector<std::int64_t>& reach,
                    std::vector<std::uint8_t>* covered) {
  const std::uint64_t n = w.size();
  reach.assign(n, 0);
  if (covered) covered->assign(n, 0);
  std::uint64_t hits = 0;
  for (VertexId v = 0; v < n; ++v) {
    std::int64_t r = y_at(v);
    w.for_each_in_neighbor(v, [&](VertexId u) {
      const std::int64_t in = reach[u] - 1;
      if (in > r) r = in;
    });
    reach[v] = r;
    if (r > 0) {
      ++hits;
      if (covered) (*covered)[v] = 1;
    }
  }
  return hits;
}

}  // namespace detail

// Deterministic cover from explicit radii (one per vertex id).
inline CoverSample cover_from_values(const Window& w,
                                     std::span<const std::int64_t> y) {
  if (y.size() != w.size())
    throw std::invalid_argument("cover_from_values: need one radius per vertex");
  CoverSample s{w, 0, std::vector<std::int64_t>(y.begin(), y.end()), {}, 0};
  std::vector<std::int64_t> reach;
  s.covered_count = detail::sweep(
      w, [&](VertexId v) { return s.y[v]; }, reach, &s.covered);
  return s;
}

// Samples radii from the spec and covers the window. Full-lattice windows
// are refused when the truncation bound is infinite; the analytic verdict
// rides on the exception.
inline CoverSample sample_cover(const Window& w,
                                const dist::DistributionSpec& spec,
                                std::uint64_t seed) {
  if (w.family() == graphs::Family::FullLattice &&
      dist::moment_diverges(spec, w.dim())) {
    throw WindowRefused(
        "sample_cover: truncation bound is infinite; the window cannot "
        "approximate Z^n here (coverage is a.s. total)",
        CoverageVerdict::CoveredAlmostSurely);
  }
  const std::uint64_t key = detail::vertex_stream(seed);
  CoverSample s{w, seed, std::vector<std::int64_t>(w.size()), {}, 0};
  for (VertexId v = 0; v < w.size(); ++v) s.y[v] = dist::sample_at(spec, key, v);
  std::vector<std::int64_t> reach;
  s.covered_count = detail::sweep(
      w, [&](VertexId v) { return s.y[v]; }, reach, &s.covered);
  return s;
}

// Raised by coupling_check when the covering sweep and the exchange chain
// disagree on some site (they never should).
struct CouplingMismatch : std::logic_error {
  CouplingMismatch(std::uint64_t site_, std::uint64_t seed_)
      : std::logic_error("coupling mismatch at site " + std::to_string(site_) +
                         " under seed " + std::to_string(seed_)),
        site(site_), seed(seed_) {}
  std::uint64_t site;
  std::uint64_t seed;
};

// The half-line identity: drive the exchange chain with X_0 = Y_0,
// X_{k+1} = max(X_k - 1, Y_{k+1}) on the same radii the covering sweep
// sees, and site k of N_0 is covered exactly when X_k > 0. Both sides are
// computed independently (sweep vs. chain recursion) from one Y draw.
inline bool coupling_check(const dist::DistributionSpec& spec, std::uint64_t n,
                           std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("coupling_check: need n >= 1");
  const Window w = Window::half_lattice(1, static_cast<std::int64_t>(n));
  const std::uint64_t key = detail::vertex_stream(seed);
  std::vector<std::int64_t> ys(n);
  for (std::uint64_t i = 0; i < n; ++i) ys[i] = dist::sample_at(spec, key, i);

  const CoverSample cover = cover_from_values(w, ys);
  const exchange::PathSample path = exchange::path_from_values(
      std::span<const std::int64_t>(ys).subspan(1), /*x0=*/ys[0]);
  for (std::uint64_t k = 0; k < n; ++k) {
    const bool chain_covered = path.states[k] > 0;
    if (chain_covered != (cover.covered[k] != 0))
      throw CouplingMismatch(k, seed);
  }
  return true;
}

// q_m = P[site m of N_0 is uncovered] = prod_{j=0}^m F(j), in log space.
inline std::vector<double> q_sequence(const dist::DistributionSpec& spec,
                                      std::size_t m_max) {
  std::vector<double> q(m_max + 1);
  double log_q = 0.0;
  for (std::size_t m = 0; m <= m_max; ++m) {
    log_q += std::log(spec.cdf(static_cast<std::int64_t>(m)));
    q[m] = std::exp(log_q);
  }
  return q;
}

struct UncoveredLineEstimate {
  double partial_sum = 0.0;        // sum of q_m up to m_max
  bool converged = false;          // analytic: the full series is finite
  double remainder_estimate = 0.0; // heuristic tail size, not a bound
};

// E[#V^c on N_0] = sum_m q_m. The convergence verdict is analytic
// (transience of the chain); the remainder heuristic extends the power-tail
// decay q_m ~ m^{-c} past the truncation and is reported, never asserted.
inline UncoveredLineEstimate expected_uncovered_line(
    const dist::DistributionSpec& spec, std::size_t m_max) {
  UncoveredLineEstimate est;
  const std::vector<double> q = q_sequence(spec, m_max);
  for (double v : q) est.partial_sum += v;
  est.converged =
      exchange::classify(spec) == exchange::Classification::Transient;
  if (est.converged && spec.tail_model() == dist::TailModel::PowerTail) {
    const double c = spec.power_constant();
    est.remainder_estimate = q.back() * static_cast<double>(m_max) / (c - 1.0);
  }
  return est;
}

struct GeometricFitSummary {
  bool attempted = false;
  double p_hat = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

struct CensusOptions {
  int workers = 1;
  bool count_clusters = false;
};

struct UncoveredStats {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;     // uncovered core vertices per trial
  std::vector<std::uint8_t> censored;    // per trial
  double mean = 0.0;
  double variance = 0.0;
  std::vector<std::uint64_t> histogram;  // histogram[k] = #trials with count k
  std::uint64_t censored_trials = 0;
  GeometricFitSummary geometric;         // fitted on 1-d half-line windows
  bool cluster_stats = false;
  double mean_uncovered_components = 0.0;
  double mean_covered_components = 0.0;
};

namespace detail {

// Weak-connectivity component counts of the covered and uncovered subsets,
// over undirected versions of the window edges.
inline std::pair<std::uint64_t, std::uint64_t> component_counts(
    const Window& w, const std::vector<std::uint8_t>& covered) {
  const std::uint64_t n = w.size();
  std::vector<VertexId> root(n);
  for (VertexId v = 0; v < n; ++v) root[v] = v;
  const auto find = [&](VertexId v) {
    while (root[v] != v) {
      root[v] = root[root[v]];
      v = root[v];
    }
    return v;
  };
  std::uint64_t merges_same[2] = {0, 0};
  std::uint64_t count_subset[2] = {0, 0};
  for (VertexId v = 0; v < n; ++v) {
    ++count_subset[covered[v] ? 1 : 0];
    w.for_each_in_neighbor(v, [&](VertexId u) {
      if (covered[u] != covered[v]) return;
      const VertexId ru = find(u);
      const VertexId rv = find(v);
      if (ru != rv) {
        root[ru] = rv;
        ++merges_same[covered[v] ? 1 : 0];
      }
    });
  }
  return {count_subset[0] - merges_same[0], count_subset[1] - merges_same[1]};
}

}  // namespace detail

// Repeated covering of one window; per-trial uncovered counts over the core
// plus right-censoring flags (an uncovered vertex within distance 1 of the
// far boundary means the trial's count may be truncated).
inline UncoveredStats uncovered_census(const Window& w,
                                       const dist::DistributionSpec& spec,
                                       std::uint64_t trials, std::uint64_t seed,
                                       const CensusOptions& opt = {}) {
  if (w.family() == graphs::Family::FullLattice) {
    // Force the refusal path early, with the same verdict sample_cover uses.
    if (dist::moment_diverges(spec, w.dim()))
      throw WindowRefused(
          "uncovered_census: truncation bound is infinite on this window",
          CoverageVerdict::CoveredAlmostSurely);
  }
  UncoveredStats out;
  out.trials = trials;
  out.counts.assign(trials, 0);
  out.censored.assign(trials, 0);
  std::vector<std::uint64_t> uncovered_comps(opt.count_clusters ? trials : 0);
  std::vector<std::uint64_t> covered_comps(opt.count_clusters ? trials : 0);

  const std::uint64_t census_key = rng::derive(seed, rng::tag("percoflow.census"));
  const std::uint64_t n = w.size();
  parallel::run_trials(trials, opt.workers, [&](std::size_t t) {
    const std::uint64_t trial_key = detail::vertex_stream(
        rng::derive(census_key, static_cast<std::uint64_t>(t)));
    thread_local std::vector<std::int64_t> reach;
    thread_local std::vector<std::uint8_t> covered;
    std::vector<std::uint8_t>* flags = opt.count_clusters ? &covered : nullptr;
    std::uint64_t uncovered = 0;
    std::uint8_t cens = 0;
    reach.assign(n, 0);
    if (flags) flags->assign(n, 0);
    for (VertexId v = 0; v < n; ++v) {
      std::int64_t r = dist::sample_at(spec, trial_key, v);
      w.for_each_in_neighbor(v, [&](VertexId u) {
        const std::int64_t in = reach[u] - 1;
        if (in > r) r = in;
      });
      reach[v] = r;
      if (r > 0) {
        if (flags) (*flags)[v] = 1;
      } else if (w.in_core(v)) {
        ++uncovered;
        if (w.near_far_boundary(v)) cens = 1;
      }
    }
    out.counts[t] = uncovered;
    out.censored[t] = cens;
    if (opt.count_clusters) {
      const auto [unc, cov] = detail::component_counts(w, covered);
      uncovered_comps[t] = unc;
      covered_comps[t] = cov;
    }
  });

  stats::RunningMoments mom;
  std::uint64_t max_count = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    mom.add(static_cast<double>(out.counts[t]));
    out.censored_trials += out.censored[t];
    if (out.counts[t] > max_count) max_count = out.counts[t];
  }
  out.mean = mom.mean();
  out.variance = mom.variance();
  out.histogram.assign(max_count + 1, 0);
  for (std::uint64_t t = 0; t < trials; ++t) ++out.histogram[out.counts[t]];
  if (opt.count_clusters) {
    out.cluster_stats = true;
    stats::RunningMoments mu, mc;
    for (std::uint64_t t = 0; t < trials; ++t) {
      mu.add(static_cast<double>(uncovered_comps[t]));
      mc.add(static_cast<double>(covered_comps[t]));
    }
    out.mean_uncovered_components = mu.mean();
    out.mean_covered_components = mc.mean();
  }
  // On the half line the total uncovered count is geometric (transient
  // regime); fit and test whenever the window is that shape.
  if (w.family() == graphs::Family::HalfLattice && w.dim() == 1 && trials >= 100) {
    const stats::GeometricFit fit = stats::fit_geometric(out.histogram, trials);
    out.geometric.attempted = fit.valid;
    out.geometric.p_hat = fit.p_hat;
    out.geometric.chi2 = fit.gof.statistic;
    out.geometric.dof = fit.gof.dof;
    out.geometric.p_value = fit.gof.p_value;
  }
  return out;
}

}  // namespace percoflow::percolation
