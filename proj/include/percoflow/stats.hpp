#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "percoflow/numerics.hpp"

// Small statistics toolkit used by the Monte Carlo layers: streaming moments,
// total variation distance, and chi-square goodness of fit with the usual
// expected-count bin merging.

namespace percoflow::stats {

// Welford accumulator for mean and variance.
class RunningMoments {
 public:
  void add(double x) noexcept {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
  }

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  // Unbiased sample variance; zero until two observations arrive.
  double variance() const noexcept {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double std_error() const noexcept {
    return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Total variation distance between two finitely supported laws given as
// vectors of point masses; the shorter vector is padded with zeros.
inline double total_variation(const std::vector<double>& a,
                              const std::vector<double>& b) {
  const std::size_t n = a.size() > b.size() ? a.size() : b.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    s += std::fabs(x - y);
  }
  return 0.5 * s;
}

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t bins_used = 0;
};

// Pearson chi-square test of observed counts against expected counts.
// Trailing cells are merged until every cell expects at least min_expected;
// estimated_params is subtracted from the degrees of freedom.
inline GofResult chi_square_gof(const std::vector<double>& observed,
                                const std::vector<double>& expected,
                                int estimated_params,
                                double min_expected = 5.0) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square_gof: length mismatch");
  std::vector<double> obs;
  std::vector<double> exp;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!exp.empty() && exp.back() < min_expected) {
      obs.back() += observed[i];
      exp.back() += expected[i];
    } else {
      obs.push_back(observed[i]);
      exp.push_back(expected[i]);
    }
  }
  // The final cell may still be thin; fold it into its neighbour.
  while (exp.size() > 1 && exp.back() < min_expected) {
    exp[exp.size() - 2] += exp.back();
    obs[obs.size() - 2] += obs.back();
    exp.pop_back();
    obs.pop_back();
  }
  GofResult r;
  r.bins_used = exp.size();
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (exp[i] <= 0.0) continue;
    const double d = obs[i] - exp[i];
    r.statistic += d * d / exp[i];
  }
  r.dof = static_cast<int>(exp.size()) - 1 - estimated_params;
  r.p_value = r.dof >= 1
                  ? numerics::chi_square_sf(r.statistic, static_cast<double>(r.dof))
                  : 1.0;
  return r;
}

struct GeometricFit {
  bool valid = false;
  double p_hat = 0.0;  // fitted success probability, P[N = 0]
  GofResult gof;
};

// Fits counts[j] (number of trials observing value j) to the geometric law
// P[N = j] = p (1-p)^j by matching the zero cell, then tests the fit.
inline GeometricFit fit_geometric(const std::vector<std::uint64_t>& counts,
                                  std::uint64_t trials) {
  GeometricFit fit;
  if (trials == 0 || counts.empty()) return fit;
  fit.p_hat = static_cast<double>(counts[0]) / static_cast<double>(trials);
  if (fit.p_hat <= 0.0 || fit.p_hat >= 1.0) return fit;  // degenerate sample
  std::vector<double> obs(counts.size() + 1, 0.0);
  std::vector<double> exp(counts.size() + 1, 0.0);
  double cum = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    obs[j] = static_cast<double>(counts[j]);
    exp[j] = static_cast<double>(trials) * fit.p_hat *
             std::pow(1.0 - fit.p_hat, static_cast<double>(j));
    cum += exp[j];
  }
  // Right tail beyond the observed range.
  exp[counts.size()] = static_cast<double>(trials) - cum;
  fit.gof = chi_square_gof(obs, exp, /*estimated_params=*/1);
  fit.valid = fit.gof.dof >= 1;
  return fit;
}

}  // namespace percoflow::stats
