#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "percoflow/dist.hpp"
#include "percoflow/numerics.hpp"
#include "percoflow/rng.hpp"

// The constant-decrement random exchange chain
//
//   X_{k+1} = max(X_k - 1, Y_{k+1}),   Y i.i.d. ~ spec,
//
// its transition truncations, the closed-form stationary measure
//
//   tau_x = tau_0 * T(x-1) / prod_{y<x} F(y),
//
// partial Green sums, the truncated spectral radius, and the exact
// recurrence/transience classification:
//
//   positive recurrent  <=>  E[Y] finite
//   transient           <=>  sum_m prod_{k=1}^m F(k-1) converges
//   null recurrent      otherwise.
//
// Both criteria are decidable in closed form for the three tail models, so
// classify never needs numerics.

namespace percoflow::exchange {

inline std::int64_t step(std::int64_t x, std::int64_t y) noexcept {
  return x - 1 > y ? x - 1 : y;
}

struct PathSample {
  std::vector<std::int64_t> states;  // X_0, ..., X_n
  std::vector<std::int64_t> draws;   // Y_1, ..., Y_n
};

// Replays the recursion over explicit draws.
inline PathSample path_from_values(std::span<const std::int64_t> draws,
                                   std::int64_t x0 = 0) {
  PathSample p;
  p.draws.assign(draws.begin(), draws.end());
  p.states.resize(draws.size() + 1);
  p.states[0] = x0;
  for (std::size_t k = 0; k < draws.size(); ++k)
    p.states[k + 1] = step(p.states[k], draws[k]);
  return p;
}

inline PathSample simulate_path(const dist::DistributionSpec& spec,
                                std::size_t steps, std::uint64_t seed,
                                std::int64_t x0 = 0) {
  const std::uint64_t key = rng::derive(seed, rng::tag("percoflow.path"));
  std::vector<std::int64_t> draws(steps);
  for (std::size_t k = 0; k < steps; ++k)
    draws[k] = dist::sample_at(spec, key, k);
  return path_from_values(draws, x0);
}

struct TransitionMatrix {
  std::size_t size = 0;
  bool exact = false;         // true when no probability mass escapes the cut
  std::vector<double> data;   // row-major, data[x*size + y] = P(x -> y)

  double at(std::size_t x, std::size_t y) const { return data[x * size + y]; }
};

// Truncation of the transition kernel to states {0, ..., size-1}:
// P(x, x-1) = F(x-1) and P(x, y) = mu_y for y >= x. Exact (row-stochastic)
// iff the spec has finite support below the cut.
inline TransitionMatrix transition_matrix(const dist::DistributionSpec& spec,
                                          std::size_t size) {
  if (size < 2) throw std::invalid_argument("transition_matrix: need size >= 2");
  TransitionMatrix m;
  m.size = size;
  m.data.assign(size * size, 0.0);
  for (std::size_t x = 0; x < size; ++x) {
    if (x > 0)
      m.data[x * size + (x - 1)] = spec.cdf(static_cast<std::int64_t>(x) - 1);
    for (std::size_t y = x; y < size; ++y)
      m.data[x * size + y] = spec.pmf(static_cast<std::int64_t>(y));
  }
  const auto top = spec.support_top();
  m.exact = top.has_value() && static_cast<std::int64_t>(size) > *top;
  return m;
}

// Documented default truncation for matrix-based estimates.
inline std::size_t default_truncation_size(const dist::DistributionSpec& spec) {
  const auto top = spec.support_top();
  if (top.has_value()) return static_cast<std::size_t>(*top) + 1;
  const auto k = static_cast<std::size_t>(spec.onset());
  return k + 32 > 64 ? k + 32 : 64;
}

// tau_x would overflow the double range past largest_safe_x.
struct SaturationError : std::overflow_error {
  SaturationError(std::int64_t safe)
      : std::overflow_error("stationary measure overflows past x = " +
                            std::to_string(safe)),
        largest_safe_x(safe) {}
  std::int64_t largest_safe_x;
};

struct StationaryMeasure {
  std::vector<double> raw;         // tau with tau_0 = 1
  bool normalizable = false;       // sum tau finite <=> E[Y] finite
  std::vector<double> normalized;  // empty unless normalizable
};

// Entries tau_0..tau_K of the stationary measure, computed in log space:
// log tau_x = log T(x-1) - sum_{y<x} log F(y).
inline StationaryMeasure stationary_measure(const dist::DistributionSpec& spec,
                                            std::size_t K) {
  StationaryMeasure out;
  out.raw.resize(K + 1);
  out.raw[0] = 1.0;
  double log_denominator = 0.0;
  for (std::size_t x = 1; x <= K; ++x) {
    log_denominator += std::log(spec.cdf(static_cast<std::int64_t>(x) - 1));
    const double tail = spec.tail(static_cast<std::int64_t>(x) - 1);
    const double log_tau =
        (tail > 0.0 ? std::log(tail) : -numerics::kInf) - log_denominator;
    if (log_tau > 700.0) throw SaturationError(static_cast<std::int64_t>(x) - 1);
    out.raw[x] = std::exp(log_tau);
  }
  out.normalizable = spec.mean().has_value();
  if (out.normalizable) {
    // Normalize against the computed range only; values beyond K are not
    // extrapolated. For finite support with K >= n_0 the range is the whole
    // measure (tau vanishes past the top), so this is exact; otherwise the
    // caller controls accuracy through K (the tau-tail decays like the
    // radius tail).
    double total = 0.0;
    for (double t : out.raw) total += t;
    out.normalized.resize(K + 1);
    for (std::size_t x = 0; x <= K; ++x) out.normalized[x] = out.raw[x] / total;
  }
  return out;
}

// Partial Green sum G_N(x, y; z) = sum_{n=0}^N z^n P^n(x, y) on a size-cut
// that keeps every contributing path below the cut, so the truncated powers
// equal the true ones. Finite-support specs need size > max(x, n_0); with an
// infinite tail a path through any state s > y + N can no longer return to y
// within the horizon, so size > max(x, y + N) suffices.
inline double green_partial(const dist::DistributionSpec& spec, std::int64_t x,
                            std::int64_t y, double z, std::size_t N,
                            std::size_t size) {
  if (z <= 0.0) throw std::invalid_argument("green_partial: need z > 0");
  if (x < 0 || y < 0) throw std::invalid_argument("green_partial: states >= 0");
  const auto top = spec.support_top();
  const std::int64_t needed =
      top.has_value()
          ? (x > *top ? x : *top) + 1
          : (x > y + static_cast<std::int64_t>(N) ? x
                                                  : y + static_cast<std::int64_t>(N)) + 1;
  if (static_cast<std::int64_t>(size) < needed)
    throw std::invalid_argument(
        "green_partial: size " + std::to_string(size) +
        " is not truncation-exact here; need at least " + std::to_string(needed));
  const TransitionMatrix P = transition_matrix(spec, size);
  std::vector<double> v(size, 0.0);
  v[static_cast<std::size_t>(x)] = 1.0;
  double acc = v[static_cast<std::size_t>(y)];  // n = 0 term
  std::vector<double> w(size, 0.0);
  double zn = 1.0;
  for (std::size_t n = 1; n <= N; ++n) {
    for (std::size_t j = 0; j < size; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < size; ++i) s += v[i] * P.data[i * size + j];
      w[j] = s;
    }
    v.swap(w);
    zn *= z;
    acc += zn * v[static_cast<std::size_t>(y)];
  }
  return acc;
}

// Perron root of the size-truncation; nondecreasing in size, equal to
// rho(P) once a finite-support cut is exact.
inline double spectral_radius(const dist::DistributionSpec& spec,
                              std::size_t size, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("spectral_radius: need tol > 0");
  const TransitionMatrix P = transition_matrix(spec, size);
  return numerics::perron_root(P.data, size, tol);
}

enum class Classification { PositiveRecurrent, NullRecurrent, Transient };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::PositiveRecurrent: return "positive-recurrent";
    case Classification::NullRecurrent: return "null-recurrent";
    case Classification::Transient: return "transient";
  }
  return "?";
}

inline Classification classify(const dist::DistributionSpec& spec) {
  if (spec.mean().has_value()) return Classification::PositiveRecurrent;
  // Infinite mean: only the power tail; transient iff the series converges,
  // which the ratio test decides at c > 1.
  if (spec.tail_model() == dist::TailModel::PowerTail &&
      spec.power_constant() > 1.0)
    return Classification::Transient;
  return Classification::NullRecurrent;
}

// Empirical state frequencies over a path, restricted to {0, ..., size-1}.
inline std::vector<double> occupation_distribution(
    std::span<const std::int64_t> states, std::size_t size) {
  std::vector<double> freq(size, 0.0);
  if (states.empty()) return freq;
  for (std::int64_t s : states) {
    if (s >= 0 && s < static_cast<std::int64_t>(size))
      freq[static_cast<std::size_t>(s)] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(states.size());
  return freq;
}

}  // namespace percoflow::exchange
