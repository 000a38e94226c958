#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "percoflow/dist.hpp"
#include "percoflow/exchange.hpp"
#include "percoflow/numerics.hpp"
#include "percoflow/parallel.hpp"
#include "percoflow/rng.hpp"

// Covering of the directed n-ary tree.
//
// r_m = P[some depth-m vertex is uncovered] obeys
//
//   r_{m+1} = (1 - (1 - r_m)^n) F(m+1),    r_0 = mu_0,
//
// equivalently 1 - r_{m+1} = T(m+1) + F(m+1) (1 - r_m)^n, which is the form
// computed here: tracking ln(1 - r) keeps the sequence exact long after
// 1 - r underflows (it shrinks doubly exponentially). The base case extends
// the recurrence to m = 0: the root is "uncovered at depth 0" iff its own
// radius is 0.
//
// Covered vertices carry a type (their remaining reach); each has n
// children whose types follow the exchange kernel restricted to {1, 2, ...},
// i.e. the mean matrix M = P with row and column 0 deleted. The covered set
// contains an infinite path iff this n-fold branching process survives iff
// rho(M) > 1/n.

namespace percoflow::tree {

struct RSequence {
  int arity = 2;
  std::vector<double> r;      // r[m]
  std::vector<double> log1m;  // ln(1 - r[m]), the exact recursion variable
};

inline RSequence r_recurrence(const dist::DistributionSpec& spec, int arity,
                              std::size_t m_max) {
  if (arity < 2) throw std::invalid_argument("r_recurrence: need arity >= 2");
  RSequence seq;
  seq.arity = arity;
  seq.r.reserve(m_max + 1);
  seq.log1m.reserve(m_max + 1);
  double log1m = std::log1p(-spec.pmf(0));
  seq.log1m.push_back(log1m);
  seq.r.push_back(-std::expm1(log1m));
  for (std::size_t m = 0; m < m_max; ++m) {
    const auto d = static_cast<std::int64_t>(m) + 1;
    const double tail = spec.tail(d);
    const double pow_log = static_cast<double>(arity) * log1m;
    if (tail == 0.0) {
      // F(m+1) = 1: pure complement powering; exact when arity is 2.
      log1m = pow_log;
    } else {
      log1m = numerics::log_sum_exp(std::log(tail),
                                    std::log(spec.cdf(d)) + pow_log);
    }
    seq.log1m.push_back(log1m);
    seq.r.push_back(-std::expm1(log1m));
  }
  return seq;
}

// Nonzero fixed point x_N = 2 - 1/F_N of x -> x (2 - x) F_N, the binary-tree
// lower bound map; only meaningful when F_N > 1/2.
inline double fixed_point(double f_bound, int arity) {
  if (arity != 2)
    throw std::invalid_argument("fixed_point: closed form known for arity 2 only");
  if (!(f_bound > 0.5 && f_bound <= 1.0))
    throw std::invalid_argument("fixed_point: need F_N in (1/2, 1]");
  return 2.0 - 1.0 / f_bound;
}

struct LogisticForm {
  double c = 0.0;
  RSequence seq;
};

// For finite support on the binary tree the recurrence past the top of the
// support is exact squaring of 1 - r, so r_m = 1 - exp(-c 2^m) with c fitted
// at m = n_0. Powers of two are applied with ldexp, making the closed form
// bit-identical to the recurrence from n_0 on.
inline LogisticForm logistic_closed_form(const dist::DistributionSpec& spec,
                                         std::size_t m_max) {
  const auto top = spec.support_top();
  if (!top.has_value())
    throw std::invalid_argument("logistic_closed_form: finite support only");
  const auto n0 = static_cast<std::size_t>(*top);
  const RSequence rec =
      r_recurrence(spec, 2, m_max > n0 ? m_max : n0);
  LogisticForm out;
  out.c = std::ldexp(-rec.log1m[n0], -static_cast<int>(n0));
  out.seq.arity = 2;
  out.seq.r.reserve(m_max + 1);
  out.seq.log1m.reserve(m_max + 1);
  for (std::size_t m = 0; m <= m_max; ++m) {
    const double lg = std::ldexp(-out.c, static_cast<int>(m));
    out.seq.log1m.push_back(lg);
    out.seq.r.push_back(-std::expm1(lg));
  }
  return out;
}

struct MeanMatrixTruncation {
  std::size_t size = 0;       // types 1..size
  bool exact = false;         // finite support fully inside the cut
  std::vector<double> data;   // row-major over (x-1, y-1)

  double at(std::size_t x, std::size_t y) const {  // 1-based types
    return data[(x - 1) * size + (y - 1)];
  }
};

// The transition truncation on {0..size} with row and column 0 deleted.
inline MeanMatrixTruncation mean_matrix(const dist::DistributionSpec& spec,
                                        std::size_t size) {
  if (size < 1) throw std::invalid_argument("mean_matrix: need size >= 1");
  const exchange::TransitionMatrix P =
      exchange::transition_matrix(spec, size + 1);
  MeanMatrixTruncation m;
  m.size = size;
  m.data.assign(size * size, 0.0);
  for (std::size_t x = 1; x <= size; ++x)
    for (std::size_t y = 1; y <= size; ++y)
      m.data[(x - 1) * size + (y - 1)] = P.at(x, y);
  const auto top = spec.support_top();
  // Types never exceed max(root type, n_0), so a finite-support cut at n_0
  // captures the whole reachable type space.
  m.exact = top.has_value() && static_cast<std::int64_t>(size) >= *top;
  return m;
}

inline double rho_mean_matrix(const dist::DistributionSpec& spec,
                              std::size_t size, double tol) {
  const MeanMatrixTruncation m = mean_matrix(spec, size);
  return numerics::perron_root(m.data, size, tol);
}

// Characteristic polynomial of the mean matrix of the two-point law
// mu = (1-p) delta_0 + p delta_n, by the pole-free recurrence
// chi_k = z chi_{k-1} - p (1-p)^{k-1}, chi_1 = z - p.
inline double char_poly(int n, double p, double z) {
  if (n < 1) throw std::invalid_argument("char_poly: need n >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("char_poly: need p in (0,1)");
  double chi = z - p;
  double pow1mp = 1.0;  // (1-p)^{k-1}
  for (int k = 2; k <= n; ++k) {
    pow1mp *= 1.0 - p;
    chi = z * chi - p * pow1mp;
  }
  return chi;
}

// Closed form (p (1-p)^n + (z-1) z^n) / (p + z - 1); the denominator's zero
// at z = 1-p is removable (the numerator shares it), so near the pole the
// recurrence value is returned instead.
inline double char_poly_closed(int n, double p, double z) {
  const double den = p + z - 1.0;
  if (std::fabs(den) < 1e-9) return char_poly(n, p, z);
  return (p * std::pow(1.0 - p, static_cast<double>(n)) +
          (z - 1.0) * std::pow(z, static_cast<double>(n))) /
         den;
}

enum class CriterionVerdict { Satisfied, NotSatisfied, Indeterminate };

inline const char* to_string(CriterionVerdict v) {
  switch (v) {
    case CriterionVerdict::Satisfied: return "true";
    case CriterionVerdict::NotSatisfied: return "false";
    case CriterionVerdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct CriterionReport {
  double rho = 0.0;
  double rho_half_size = 0.0;  // monotone lower certificate (0 if size < 2)
  double threshold = 0.0;      // 1 / arity
  std::size_t size = 0;
  bool exact = false;
  CriterionVerdict verdict = CriterionVerdict::Indeterminate;
};

// Does the covered set contain an infinite path a.s.? Decided by
// rho(M) vs 1/n with an indeterminate band of width tol; non-exact
// truncations also report rho at half size, which must not exceed rho
// (monotonicity) and shows how settled the estimate is.
inline CriterionReport infinite_path_criterion(const dist::DistributionSpec& spec,
                                               int arity, std::size_t size,
                                               double tol) {
  if (arity < 2)
    throw std::invalid_argument("infinite_path_criterion: need arity >= 2");
  if (tol < 0.0) throw std::invalid_argument("infinite_path_criterion: tol >= 0");
  CriterionReport rep;
  const MeanMatrixTruncation m = mean_matrix(spec, size);
  rep.size = size;
  rep.exact = m.exact;
  rep.rho = numerics::perron_root(m.data, size, 1e-13);
  if (!m.exact && size >= 2)
    rep.rho_half_size = rho_mean_matrix(spec, size / 2, 1e-13);
  rep.threshold = 1.0 / static_cast<double>(arity);
  if (rep.rho > rep.threshold + tol)
    rep.verdict = CriterionVerdict::Satisfied;
  else if (rep.rho < rep.threshold - tol)
    rep.verdict = CriterionVerdict::NotSatisfied;
  else
    rep.verdict = CriterionVerdict::Indeterminate;
  return rep;
}

struct BranchingResult {
  // generations[g][x] = individuals of type x alive in generation g
  // (index 0 unused).
  std::vector<std::vector<std::uint64_t>> generations;
  bool extinct = false;
  std::size_t extinct_generation = 0;  // meaningful when extinct
  bool saturated = false;
  // last_birth[x] = last generation in which a type-x individual was born,
  // -1 if never; local_survival[x] applies the trailing-window proxy.
  std::vector<std::int64_t> last_birth;
  std::vector<std::uint8_t> local_survival;
};

namespace detail {

// One branching run with dense per-type counters. Children of a type-x
// individual have type max(x-1, Y); type 0 is a child not born. Returns
// (alive at the end, saturated).
template <class OnGeneration>
std::pair<bool, bool> branching_core(const dist::DistributionSpec& spec,
                                     int arity, std::size_t generations,
                                     rng::CounterRng& gen,
                                     std::uint64_t population_cap,
                                     std::vector<std::uint64_t>& cur,
                                     std::vector<std::uint64_t>& nxt,
                                     OnGeneration&& on_generation) {
  cur.assign(2, 0);
  const std::int64_t y0 = dist::sample(spec, gen);
  if (y0 >= 1) {
    if (static_cast<std::size_t>(y0) >= cur.size())
      cur.resize(static_cast<std::size_t>(y0) + 1, 0);
    cur[static_cast<std::size_t>(y0)] = 1;
  }
  on_generation(0, cur);
  if (y0 < 1) return {false, false};
  for (std::size_t g = 1; g <= generations; ++g) {
    nxt.assign(cur.size(), 0);
    std::uint64_t total = 0;
    for (std::size_t x = 1; x < cur.size(); ++x) {
      const std::uint64_t k = cur[x];
      for (std::uint64_t i = 0; i < k; ++i) {
        for (int j = 0; j < arity; ++j) {
          const std::int64_t y = dist::sample(spec, gen);
          const std::int64_t child =
              static_cast<std::int64_t>(x) - 1 > y ? static_cast<std::int64_t>(x) - 1
                                                   : y;
          if (child < 1) continue;
          if (static_cast<std::size_t>(child) >= nxt.size())
            nxt.resize(static_cast<std::size_t>(child) + 1, 0);
          ++nxt[static_cast<std::size_t>(child)];
          if (++total > population_cap) {
            on_generation(g, nxt);
            return {true, true};
          }
        }
      }
    }
    cur.swap(nxt);
    on_generation(g, cur);
    if (total == 0) return {false, false};
  }
  return {true, false};
}

}  // namespace percoflow::tree::detail

// Full record of one branching run.
inline BranchingResult simulate_branching(const dist::DistributionSpec& spec,
                                          int arity, std::size_t generations,
                                          std::uint64_t seed,
                                          std::uint64_t population_cap = 1000000) {
  if (arity < 2) throw std::invalid_argument("simulate_branching: arity >= 2");
  if (generations < 1)
    throw std::invalid_argument("simulate_branching: generations >= 1");
  rng::CounterRng gen(rng::derive(seed, rng::tag("percoflow.branching")));
  BranchingResult res;
  std::vector<std::uint64_t> cur, nxt;
  const auto [alive, saturated] = detail::branching_core(
      spec, arity, generations, gen, population_cap, cur, nxt,
      [&](std::size_t g, const std::vector<std::uint64_t>& census) {
        (void)g;
        res.generations.push_back(census);
      });
  res.saturated = saturated;
  res.extinct = !alive;
  // Birth bookkeeping from the stored censuses.
  std::size_t max_type = 1;
  for (const auto& c : res.generations)
    if (c.size() > max_type) max_type = c.size();
  res.last_birth.assign(max_type, -1);
  for (std::size_t g = 0; g < res.generations.size(); ++g) {
    const auto& c = res.generations[g];
    for (std::size_t x = 1; x < c.size(); ++x)
      if (c[x] > 0) res.last_birth[x] = static_cast<std::int64_t>(g);
  }
  if (res.extinct) res.extinct_generation = res.generations.size() - 1;
  // Local survival proxy: a type counts as locally surviving if it is born
  // within the trailing quarter of the generations actually run.
  const std::size_t last = res.generations.size() - 1;
  const std::size_t window_start = last - last / 4;
  res.local_survival.assign(max_type, 0);
  for (std::size_t x = 1; x < max_type; ++x)
    res.local_survival[x] =
        res.last_birth[x] >= static_cast<std::int64_t>(window_start) ? 1 : 0;
  return res;
}

struct SurvivalEstimate {
  std::uint64_t trials = 0;
  std::uint64_t survived = 0;
  std::uint64_t saturated = 0;
  double fraction = 0.0;
  double std_error = 0.0;
  std::vector<std::uint8_t> per_trial;  // 1 iff that trial survived
};

// Monte Carlo survival frequency over independent branching runs; trials
// share nothing, so the per-trial record is worker-count independent.
inline SurvivalEstimate branching_survival(const dist::DistributionSpec& spec,
                                           int arity, std::size_t generations,
                                           std::uint64_t trials, std::uint64_t seed,
                                           std::uint64_t population_cap = 1000000,
                                           int workers = 1) {
  SurvivalEstimate est;
  est.trials = trials;
  est.per_trial.assign(trials, 0);
  std::vector<std::uint8_t> sat(trials, 0);
  const std::uint64_t master = rng::derive(seed, rng::tag("percoflow.branching"));
  parallel::run_trials(trials, workers, [&](std::size_t t) {
    rng::CounterRng gen(rng::derive(master, static_cast<std::uint64_t>(t)));
    thread_local std::vector<std::uint64_t> cur, nxt;
    const auto [alive, saturated] =
        detail::branching_core(spec, arity, generations, gen, population_cap,
                               cur, nxt, [](std::size_t, const auto&) {});
    est.per_trial[t] = alive ? 1 : 0;
    sat[t] = saturated ? 1 : 0;
  });
  for (std::uint64_t t = 0; t < trials; ++t) {
    est.survived += est.per_trial[t];
    est.saturated += sat[t];
  }
  est.fraction = trials ? static_cast<double>(est.survived) /
                              static_cast<double>(trials)
                        : 0.0;
  est.std_error = trials ? std::sqrt(est.fraction * (1.0 - est.fraction) /
                                     static_cast<double>(trials))
                         : 0.0;
  return est;
}

struct ProbeResult {
  int depth = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double r_hat = 0.0;
  double std_error = 0.0;
  std::vector<std::uint8_t> per_trial;  // 1 iff an uncovered vertex was found
};

// Empirical r_m: per trial, sample radii over the depth-m window lazily and
// depth-first search for an uncovered vertex at depth m, pruning subtrees
// whose root reach already covers the target row and stopping at the first
// hit. Every coverer of a window vertex is its ancestor, so the window is
// exact for this event.
inline ProbeResult tree_uncovered_probe(const dist::DistributionSpec& spec,
                                        int arity, int depth,
                                        std::uint64_t trials, std::uint64_t seed,
                                        int workers = 1) {
  if (arity < 2) throw std::invalid_argument("tree_uncovered_probe: arity >= 2");
  if (depth < 0) throw std::invalid_argument("tree_uncovered_probe: depth >= 0");
  // The search touches at most the full window; refuse absurd requests.
  const double window_cost =
      std::pow(static_cast<double>(arity), static_cast<double>(depth) + 1.0);
  if (window_cost > 1e12)
    throw std::invalid_argument(
        "tree_uncovered_probe: depth needs ~" + std::to_string(window_cost) +
        " vertices per trial; the budget is 1e12");
  // offsets[l] = first id of level l
  std::vector<std::uint64_t> offsets(static_cast<std::size_t>(depth) + 2, 0);
  std::uint64_t level_count = 1;
  for (int l = 0; l <= depth; ++l) {
    offsets[static_cast<std::size_t>(l) + 1] =
        offsets[static_cast<std::size_t>(l)] + level_count;
    level_count *= static_cast<std::uint64_t>(arity);
  }

  ProbeResult res;
  res.depth = depth;
  res.trials = trials;
  res.per_trial.assign(trials, 0);
  const std::uint64_t master = rng::derive(seed, rng::tag("percoflow.probe"));
  parallel::run_trials(trials, workers, [&](std::size_t t) {
    const std::uint64_t key = rng::derive(master, static_cast<std::uint64_t>(t));
    struct Node {
      int level;
      std::uint64_t pos;       // position within the level
      std::int64_t incoming;   // parent reach - 1 (-1 at the root)
    };
    thread_local std::vector<Node> stack;
    stack.clear();
    stack.push_back({0, 0, -1});
    std::uint8_t hit = 0;
    while (!stack.empty()) {
      const Node node = stack.back();
      stack.pop_back();
      const std::uint64_t id = offsets[static_cast<std::size_t>(node.level)] + node.pos;
      const std::int64_t y = dist::inverse_cdf(spec, rng::unit_at(key, id));
      const std::int64_t reach = node.incoming > y ? node.incoming : y;
      if (node.level == depth) {
        if (reach == 0) {
          hit = 1;
          break;
        }
        continue;
      }
      // Covered through the target row: nothing uncovered below here.
      if (reach > static_cast<std::int64_t>(depth - node.level)) continue;
      for (int j = arity - 1; j >= 0; --j) {
        stack.push_back({node.level + 1,
                         node.pos * static_cast<std::uint64_t>(arity) +
                             static_cast<std::uint64_t>(j),
                         reach - 1});
      }
    }
    res.per_trial[t] = hit;
  });
  for (std::uint64_t t = 0; t < trials; ++t) res.hits += res.per_trial[t];
  res.r_hat = trials ? static_cast<double>(res.hits) / static_cast<double>(trials)
                     : 0.0;
  res.std_error = trials ? std::sqrt(res.r_hat * (1.0 - res.r_hat) /
                                     static_cast<double>(trials))
                         : 0.0;
  return res;
}

}  // namespace percoflow::tree
