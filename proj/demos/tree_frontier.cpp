// Uncovered frontier on the binary tree: the exact row recurrence, a Monte
// Carlo probe, and the spectral criterion for an infinite covered path.

#include <cstdio>

#include "percoflow/percoflow.hpp"

int main() {
  namespace pf = percoflow;
  using pf::dist::DistributionSpec;

  const auto spec = DistributionSpec::geometric(0.5);
  const int arity = 2;

  const auto seq = pf::tree::r_recurrence(spec, arity, 8);
  std::printf("P[some uncovered vertex at depth m], geometric(1/2) radii:\n");
  for (int m = 0; m <= 8; ++m) {
    const auto probe =
        pf::tree::tree_uncovered_probe(spec, arity, m, 20000, 7, 4);
    std::printf("  m=%d  exact %.6f  simulated %.6f +- %.6f\n", m,
                seq.r[static_cast<std::size_t>(m)], probe.r_hat,
                probe.std_error);
  }

  const auto report = pf::tree::infinite_path_criterion(spec, arity, 64, 1e-9);
  std::printf(
      "\ninfinite covered path: rho = %.6f vs threshold 1/%d = %.6f -> %s\n",
      report.rho, arity, report.threshold,
      pf::tree::to_string(report.verdict));

  const auto surv = pf::tree::branching_survival(
      DistributionSpec::two_point(2, 0.5), arity, 100, 2000, 11, 100000, 4);
  std::printf("covered-path branching survival (radius 2 w.p. 1/2): %.3f\n",
              surv.fraction);
  return 0;
}
