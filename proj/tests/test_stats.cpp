#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "percoflow/rng.hpp"
#include "percoflow/stats.hpp"

using namespace percoflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("running moments agree with closed forms") {
  stats::RunningMoments m;
  for (int x : {2, 4, 4, 4, 5, 5, 7, 9}) m.add(x);
  CHECK(m.count() == 8);
  CHECK_THAT(m.mean(), WithinRel(5.0, 1e-14));
  // Sample variance with Bessel correction: 32/7.
  CHECK_THAT(m.variance(), WithinRel(32.0 / 7.0, 1e-13));
  CHECK_THAT(m.std_error(), WithinRel(std::sqrt(32.0 / 7.0 / 8.0), 1e-13));
}

TEST_CASE("total variation distance") {
  CHECK(stats::total_variation({1.0, 0.0}, {1.0, 0.0}) == 0.0);
  CHECK_THAT(stats::total_variation({1.0, 0.0}, {0.0, 1.0}), WithinAbs(1.0, 1e-15));
  CHECK_THAT(stats::total_variation({0.5, 0.5}, {0.25, 0.25, 0.5}),
             WithinAbs(0.5, 1e-15));
}

TEST_CASE("chi-square GOF accepts its own law and rejects a wrong one") {
  // Sample a fair four-sided die deterministically and test against the
  // true law, then against a biased law.
  const std::uint64_t key = rng::tag("gof.die");
  std::vector<double> obs(4, 0.0);
  const std::uint64_t n = 40000;
  for (std::uint64_t i = 0; i < n; ++i)
    obs[static_cast<std::size_t>(rng::unit_at(key, i) * 4.0)] += 1.0;
  std::vector<double> fair(4, n / 4.0);
  const auto good = stats::chi_square_gof(obs, fair, 0);
  CHECK(good.dof == 3);
  CHECK(good.p_value > 0.001);
  std::vector<double> biased{0.4 * n, 0.2 * n, 0.2 * n, 0.2 * n};
  const auto bad = stats::chi_square_gof(obs, biased, 0);
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("GOF merges thin cells") {
  // The three thin trailing cells merge forward and then fold into the
  // second cell, leaving two usable bins.
  std::vector<double> obs{100.0, 50.0, 3.0, 1.0, 0.0};
  std::vector<double> expect{100.0, 50.0, 2.0, 1.5, 0.5};
  const auto g = stats::chi_square_gof(obs, expect, 0);
  CHECK(g.bins_used == 2);
  CHECK(g.dof == 1);
}

TEST_CASE("geometric fit recovers the ratio from a geometric histogram") {
  // Histogram of Geometric(p = 0.4) on {0, 1, ...} sampled by inversion.
  const double p = 0.4;
  const std::uint64_t key = rng::tag("gof.geom");
  const std::uint64_t trials = 50000;
  std::vector<std::uint64_t> hist;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double u = rng::unit_at(key, t);
    const auto v =
        static_cast<std::size_t>(std::floor(std::log1p(-u) / std::log1p(-p)));
    if (v >= hist.size()) hist.resize(v + 1, 0);
    ++hist[v];
  }
  const auto fit = stats::fit_geometric(hist, trials);
  REQUIRE(fit.valid);
  CHECK_THAT(fit.p_hat, WithinAbs(p, 0.01));
  CHECK(fit.gof.p_value > 0.001);
}
