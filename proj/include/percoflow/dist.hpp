#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "percoflow/numerics.hpp"
#include "percoflow/rng.hpp"

// Radius laws on the nonnegative integers. A spec stores an explicit head
// [mu_0, ..., mu_{K-1}] and an analytic tail model for n >= K, so cdf and
// tail values are exact at any index instead of being truncated sums:
//
//   FiniteSupport   no tail; the head is the whole law
//   GeometricTail   mu_n = A p^n for n >= K, A fixed by the leftover mass
//   PowerTail       mu_n = c / (n (n-1)) for n >= K, so P[Y > n] = c / n
//
// The power tail starts at K >= 2, carries mass c / (K-1), and is the
// canonical infinite-mean family here; its n-th moment diverges for every
// n >= 1. The geometric family keeps all moments finite.

namespace percoflow::dist {

enum class TailModel { FiniteSupport, GeometricTail, PowerTail };

inline const char* to_string(TailModel m) {
  switch (m) {
    case TailModel::FiniteSupport: return "finite";
    case TailModel::GeometricTail: return "geometric";
    case TailModel::PowerTail: return "power";
  }
  return "?";
}

class DistributionSpec {
 public:
  // Head sums to 1; support is {0, ..., head.size()-1}.
  static DistributionSpec finite(std::vector<double> head) {
    DistributionSpec s;
    s.model_ = TailModel::FiniteSupport;
    s.head_ = std::move(head);
    s.init();
    return s;
  }

  // Uniform law on {0, ..., m-1}.
  static DistributionSpec uniform(int m) {
    if (m < 2) throw std::invalid_argument("uniform: need m >= 2");
    return finite(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
  }

  // Mass p at n, mass 1-p at 0.
  static DistributionSpec two_point(std::int64_t n, double p) {
    if (n < 1) throw std::invalid_argument("two_point: need n >= 1");
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("two_point: need p in (0,1)");
    std::vector<double> head(static_cast<std::size_t>(n) + 1, 0.0);
    head.front() = 1.0 - p;
    head.back() = p;
    return finite(std::move(head));
  }

  // mu_n = (1-p) p^n on all of N_0.
  static DistributionSpec geometric(double p) {
    return geometric_tail({1.0 - p}, p);
  }

  // Explicit head, then mu_n = A p^n for n >= head.size(), with A chosen so
  // the total mass is 1.
  static DistributionSpec geometric_tail(std::vector<double> head, double p) {
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("geometric_tail: need p in (0,1)");
    if (head.empty()) throw std::invalid_argument("geometric_tail: empty head");
    DistributionSpec s;
    s.model_ = TailModel::GeometricTail;
    s.p_ = p;
    s.head_ = std::move(head);
    const double head_mass =
        std::accumulate(s.head_.begin(), s.head_.end(), 0.0);
    const auto k = static_cast<double>(s.head_.size());
    // Tail mass A p^K / (1-p) must equal 1 - head_mass.
    s.geo_coeff_ = (1.0 - head_mass) * (1.0 - p) / std::pow(p, k);
    if (!(s.geo_coeff_ > 0.0))
      throw std::invalid_argument("geometric_tail: head mass must be < 1");
    s.init();
    return s;
  }

  // Head shape (rescaled to mass 1 - c/(K-1) with K = head_shape.size()),
  // then the exact power tail with constant c.
  static DistributionSpec power_tail(std::vector<double> head_shape, double c) {
    if (head_shape.size() < 2)
      throw std::invalid_argument("power_tail: need K >= 2 (head length)");
    if (!(c > 0.0)) throw std::invalid_argument("power_tail: need c > 0");
    const auto k = static_cast<double>(head_shape.size());
    const double tail_mass = c / (k - 1.0);
    if (!(tail_mass < 1.0))
      throw std::invalid_argument(
          "power_tail: tail mass c/(K-1) must be below 1; raise K");
    double shape_mass =
        std::accumulate(head_shape.begin(), head_shape.end(), 0.0);
    if (!(shape_mass > 0.0))
      throw std::invalid_argument("power_tail: head shape has no mass");
    DistributionSpec s;
    s.model_ = TailModel::PowerTail;
    s.c_ = c;
    s.head_ = std::move(head_shape);
    const double scale = (1.0 - tail_mass) / shape_mass;
    for (double& h : s.head_) h *= scale;
    s.init();
    return s;
  }

  TailModel tail_model() const noexcept { return model_; }
  const std::vector<double>& head() const noexcept { return head_; }
  const std::vector<double>& head_cdf() const noexcept { return head_cdf_; }
  // First index governed by the tail model (head length K).
  std::int64_t onset() const noexcept {
    return static_cast<std::int64_t>(head_.size());
  }
  double ratio() const noexcept { return p_; }           // geometric tails
  double power_constant() const noexcept { return c_; }  // power tails

  // Largest support point for finite laws.
  std::optional<std::int64_t> support_top() const noexcept {
    if (model_ != TailModel::FiniteSupport) return std::nullopt;
    return top_;
  }

  double pmf(std::int64_t n) const {
    if (n < 0) return 0.0;
    if (n < onset()) return head_[static_cast<std::size_t>(n)];
    switch (model_) {
      case TailModel::FiniteSupport:
        return 0.0;
      case TailModel::GeometricTail:
        return geo_coeff_ * std::pow(p_, static_cast<double>(n));
      case TailModel::PowerTail: {
        const auto x = static_cast<double>(n);
        return c_ / (x * (x - 1.0));
      }
    }
    return 0.0;
  }

  // F(k) = P[Y <= k]; exact closed form past the head, F(-1) = 0.
  double cdf(std::int64_t k) const {
    if (k < 0) return 0.0;
    switch (model_) {
      case TailModel::FiniteSupport:
        if (k >= top_) return 1.0;
        return head_cdf_[static_cast<std::size_t>(k)];
      case TailModel::GeometricTail:
      case TailModel::PowerTail:
        if (k < onset()) return head_cdf_[static_cast<std::size_t>(k)];
        return 1.0 - tail(k);
    }
    return 1.0;
  }

  // T(k) = P[Y > k], from the analytic tail where available.
  double tail(std::int64_t k) const {
    if (k < 0) return 1.0;
    switch (model_) {
      case TailModel::FiniteSupport:
        if (k >= top_) return 0.0;
        return 1.0 - head_cdf_[static_cast<std::size_t>(k)];
      case TailModel::GeometricTail:
        if (k < onset() - 1) return 1.0 - head_cdf_[static_cast<std::size_t>(k)];
        // P[Y > k] = A p^{k+1} / (1-p)
        return geo_coeff_ * std::pow(p_, static_cast<double>(k + 1)) / (1.0 - p_);
      case TailModel::PowerTail:
        if (k < onset() - 1) return 1.0 - head_cdf_[static_cast<std::size_t>(k)];
        return c_ / static_cast<double>(k);
    }
    return 0.0;
  }

  // Expected value; nullopt when the mean is infinite.
  std::optional<double> mean() const {
    double m = 0.0;
    for (std::size_t n = 1; n < head_.size(); ++n)
      m += static_cast<double>(n) * head_[n];
    switch (model_) {
      case TailModel::FiniteSupport:
        return m;
      case TailModel::GeometricTail: {
        // sum_{n>=K} n p^n = p^K (K - (K-1) p) / (1-p)^2
        const auto k = static_cast<double>(onset());
        const double q = 1.0 - p_;
        return m + geo_coeff_ * std::pow(p_, k) * (k - (k - 1.0) * p_) / (q * q);
      }
      case TailModel::PowerTail:
        return std::nullopt;  // sum c/(n-1) diverges
    }
    return std::nullopt;
  }

 private:
  DistributionSpec() = default;

  void init() {
    if (head_.empty()) throw std::invalid_argument("spec: empty head");
    for (double h : head_)
      if (!(h >= 0.0) || h > 1.0 + 1e-12)
        throw std::invalid_argument("spec: head entries must be in [0,1]");
    if (!(head_[0] > 0.0 && head_[0] < 1.0))
      throw std::invalid_argument("spec: need mu_0 in (0,1)");
    head_cdf_.resize(head_.size());
    std::partial_sum(head_.begin(), head_.end(), head_cdf_.begin());
    double total = head_cdf_.back();
    switch (model_) {
      case TailModel::FiniteSupport:
        top_ = 0;
        for (std::size_t n = 0; n < head_.size(); ++n)
          if (head_[n] > 0.0) top_ = static_cast<std::int64_t>(n);
        if (top_ == 0)
          throw std::invalid_argument("spec: law concentrated at 0");
        break;
      case TailModel::GeometricTail:
        total += geo_coeff_ * std::pow(p_, static_cast<double>(onset())) / (1.0 - p_);
        break;
      case TailModel::PowerTail:
        total += c_ / (static_cast<double>(onset()) - 1.0);
        break;
    }
    if (std::fabs(total - 1.0) > 1e-12)
      throw std::invalid_argument("spec: total mass " + std::to_string(total) +
                                  " is not 1");
  }

  TailModel model_ = TailModel::FiniteSupport;
  std::vector<double> head_;
  std::vector<double> head_cdf_;
  double p_ = 0.0;          // geometric ratio
  double c_ = 0.0;          // power constant
  double geo_coeff_ = 0.0;  // A in mu_n = A p^n
  std::int64_t top_ = 0;    // max support point (finite model)
};

// Lightweight callable view of a spec's distribution function.
struct Cdf {
  const DistributionSpec* spec;
  double operator()(std::int64_t k) const { return spec->cdf(k); }
  double tail(std::int64_t k) const { return spec->tail(k); }
};

// Generalized inverse: smallest n with F(n) > u. Heads are bisected, tails
// are inverted in closed form with a local correction step so the result is
// exactly the generalized inverse even under rounding.
inline std::int64_t inverse_cdf(const DistributionSpec& spec, double u) {
  if (!(u >= 0.0 && u < 1.0))
    throw std::invalid_argument("inverse_cdf: u must lie in [0,1)");
  const std::vector<double>& hc = spec.head_cdf();
  const std::int64_t k = spec.onset();
  if (u < hc.back())
    return std::upper_bound(hc.begin(), hc.end(), u) - hc.begin();
  std::int64_t n = k;
  switch (spec.tail_model()) {
    case TailModel::FiniteSupport:
      return *spec.support_top();
    case TailModel::GeometricTail: {
      // Solve T(n) <= 1-u, i.e. A p^{n+1}/(1-p) <= 1-u.
      const double a = spec.tail(k - 1);  // tail mass at the onset
      const double guess =
          static_cast<double>(k - 1) + std::log((1.0 - u) / a) / std::log(spec.ratio());
      n = static_cast<std::int64_t>(std::floor(guess));
      break;
    }
    case TailModel::PowerTail:
      // T(n) = c/n <= 1-u  <=>  n >= c/(1-u).
      n = static_cast<std::int64_t>(std::ceil(spec.power_constant() / (1.0 - u)));
      break;
  }
  if (n < k) n = k;
  while (n > k && spec.cdf(n - 1) > u) --n;
  while (spec.cdf(n) <= u) ++n;
  return n;
}

inline std::int64_t sample_at(const DistributionSpec& spec, std::uint64_t key,
                              std::uint64_t counter) {
  return inverse_cdf(spec, rng::unit_at(key, counter));
}

inline std::int64_t sample(const DistributionSpec& spec, rng::CounterRng& gen) {
  return inverse_cdf(spec, gen.next_unit());
}

// Whether E[Y^n] = infinity. Geometric tails have all moments; the power
// tail P[Y > k] = c/k has none (every moment of order >= 1 diverges).
inline bool moment_diverges(const DistributionSpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("moment_diverges: need n >= 1");
  return spec.tail_model() == TailModel::PowerTail;
}

enum class SeriesVerdict { Converges, Diverges };

inline const char* to_string(SeriesVerdict v) {
  return v == SeriesVerdict::Converges ? "converges" : "diverges";
}

struct KestenSeries {
  // partial_sums[m] = sum_{j=0}^{m} prod_{k=1}^{j} F(k-1); entry 0 is 1.
  std::vector<double> partial_sums;
  SeriesVerdict verdict = SeriesVerdict::Diverges;
};

// Partial sums of sum_m prod_{k=1}^m F(k-1) together with the analytic
// convergence verdict. Products are accumulated in log space. The series
// converges exactly when the tail is a power law with c > 1 (ratio test on
// F(m) = 1 - c/m); finite-support and geometric laws reach F = 1 or F -> 1
// fast enough that the terms do not vanish.
inline KestenSeries kesten_series(const DistributionSpec& spec,
                                  std::size_t m_max) {
  KestenSeries out;
  out.partial_sums.reserve(m_max + 1);
  double log_term = 0.0;
  double acc = 0.0;
  for (std::size_t m = 0; m <= m_max; ++m) {
    if (m > 0) {
      const double f = spec.cdf(static_cast<std::int64_t>(m) - 1);
      log_term += std::log(f);
    }
    acc += std::exp(log_term);
    out.partial_sums.push_back(acc);
  }
  out.verdict = (spec.tail_model() == TailModel::PowerTail &&
                 spec.power_constant() > 1.0)
                    ? SeriesVerdict::Converges
                    : SeriesVerdict::Diverges;
  return out;
}

}  // namespace percoflow::dist
