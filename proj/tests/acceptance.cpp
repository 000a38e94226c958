// Acceptance gate: one line per criterion, [PASS] or [FAIL], nonzero exit if
// anything fails. Tolerances are pinned here on purpose; loosening them is a
// behavior change, not a test fix.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "percoflow/percoflow.hpp"

namespace pf = percoflow;
using pf::dist::DistributionSpec;
using pf::graphs::Window;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void report(int index, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %s  (%s)\n", ok ? "PASS" : "FAIL", index, name,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, ...) {
  va_list args;
  va_start(args, pattern);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

// Power radius tail T(k) = 2/k past K = 10 with mass 0.7 pinned at zero.
DistributionSpec heavy_tail_spec() {
  std::vector<double> head(10, (1.0 - 2.0 / 9.0 - 0.7) / 9.0);
  head[0] = 0.7;
  return DistributionSpec::power_tail(std::move(head), 2.0);
}

// Closed-form stationary law for uniform radii on {0, ..., m-1}.
std::vector<double> uniform_stationary(int m) {
  std::vector<double> pi(static_cast<std::size_t>(m));
  double mfact = 1.0;
  for (int i = 2; i <= m; ++i) mfact *= i;
  const double lead = mfact / std::pow(m, m);
  double nfact = 1.0;
  for (int n = 0; n < m; ++n) {
    if (n > 0) nfact *= n;
    pi[static_cast<std::size_t>(n)] = lead * (m - n) * std::pow(m, n - 1) / nfact;
  }
  return pi;
}

// ---- 1: cover/chain coupling --------------------------------------------

void criterion_coupling() {
  Timer t;
  bool ok = true;
  std::string first;
  const std::vector<DistributionSpec> specs{
      DistributionSpec::uniform(3),                                   // finite
      DistributionSpec::geometric(0.5),                               // geometric
      DistributionSpec::power_tail(std::vector<double>(10, 1.0), 2.0) // power
  };
  for (const auto& spec : specs) {
    for (std::uint64_t seed = 1; seed <= 100 && ok; ++seed) {
      try {
        pf::percolation::coupling_check(spec, 10000, seed);
      } catch (const pf::percolation::CouplingMismatch& e) {
        ok = false;
        first = e.what();
      }
    }
  }
  const double sec = t.seconds();
  if (sec >= 10.0) ok = false;
  report(1, "covered set and chain positivity coincide site by site", ok,
         ok ? fmt("300 runs x 1e4 sites, %.2f s", sec)
            : (first.empty() ? fmt("overran budget: %.2f s", sec) : first));
}

// ---- 2: stationary law, uniform radii -----------------------------------

void criterion_uniform_stationary() {
  Timer t;
  bool ok = true;
  double worst_tau = 0.0, worst_tv = 0.0;
  for (int m = 2; m <= 6; ++m) {
    const auto spec = DistributionSpec::uniform(m);
    const auto tau =
        pf::exchange::stationary_measure(spec, static_cast<std::size_t>(m));
    if (!tau.normalizable) { ok = false; continue; }
    const auto want = uniform_stationary(m);
    for (int n = 0; n < m; ++n) {
      const double d = std::fabs(tau.normalized[static_cast<std::size_t>(n)] -
                                 want[static_cast<std::size_t>(n)]);
      if (d > worst_tau) worst_tau = d;
    }
    const auto path = pf::exchange::simulate_path(spec, 1000000, 40 + m);
    const auto occ = pf::exchange::occupation_distribution(
        path.states, static_cast<std::size_t>(m));
    std::vector<double> pi(tau.normalized.begin(),
                           tau.normalized.begin() + m);
    const double tv = pf::stats::total_variation(occ, pi);
    if (tv > worst_tv) worst_tv = tv;
  }
  if (worst_tau > 1e-12 || worst_tv > 0.01) ok = false;
  const double sec = t.seconds();
  if (sec >= 30.0) ok = false;
  report(2, "uniform-radius stationary law and path occupation", ok,
         fmt("max |tau err| %.2e, max TV %.4f, %.2f s", worst_tau, worst_tv, sec));
}

// ---- 3: geometric radii, q-series stationary law ------------------------

void criterion_geometric_stationary() {
  bool ok = true;
  std::string detail;
  const double phi[]{0.61264815421325652412, 0.28878809508660242128,
                     0.003368005852423121266};
  const double ps[]{0.3, 0.5, 0.8};
  double worst0 = 0.0, worst_res = 0.0, worst_ratio = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double p = ps[i];
    const auto tau =
        pf::exchange::stationary_measure(DistributionSpec::geometric(p), 200);
    if (!tau.normalizable) { ok = false; break; }
    const double d0 = std::fabs(tau.normalized[0] - phi[i]);
    if (d0 > worst0) worst0 = d0;
    // tau_n / tau_0 = p^n / (p;p)_n against a direct product.
    double poch = 1.0;
    for (int n = 1; n <= 30; ++n) {
      poch *= 1.0 - std::pow(p, n);
      const double want = std::pow(p, n) / poch;
      const double rel = std::fabs(tau.raw[static_cast<std::size_t>(n)] - want) /
                         want;
      if (rel > worst_ratio) worst_ratio = rel;
    }
    // Normalization identity: phi(p) * sum p^n/(p;p)_n = 1.
    const auto law = pf::catalog::euler_distribution(p, 200);
    if (law.identity_residual > worst_res) worst_res = law.identity_residual;
  }
  if (worst0 > 1e-10 || worst_res > 1e-10 || worst_ratio > 1e-10) ok = false;
  report(3, "geometric radii: q-series stationary law", ok,
         fmt("max |tau0 - phi| %.2e, identity residual %.2e, ratio err %.2e",
             worst0, worst_res, worst_ratio));
}

// ---- 4: urn law ----------------------------------------------------------

void criterion_urn() {
  const auto res = pf::catalog::naor_urn(5, 100000, 2026, 8);
  const auto tau = pf::exchange::stationary_measure(DistributionSpec::uniform(5), 5);
  std::vector<double> pi(tau.normalized.begin(), tau.normalized.begin() + 5);
  const double tv = pf::stats::total_variation(res.empirical, pi);
  report(4, "urn leftover count matches the stationary law", tv < 0.02,
         fmt("TV %.4f over 1e5 trials", tv));
}

// ---- 5: classification ---------------------------------------------------

void criterion_classification() {
  using pf::exchange::Classification;
  bool ok = true;
  const auto cls = [](const DistributionSpec& s) {
    return pf::exchange::classify(s);
  };
  ok &= cls(DistributionSpec::power_tail(std::vector<double>(4, 1.0), 0.5)) ==
        Classification::NullRecurrent;
  ok &= cls(DistributionSpec::power_tail(std::vector<double>(4, 1.0), 1.0)) ==
        Classification::NullRecurrent;
  ok &= cls(DistributionSpec::power_tail(std::vector<double>(10, 1.0), 2.0)) ==
        Classification::Transient;
  ok &= cls(DistributionSpec::geometric(0.5)) == Classification::PositiveRecurrent;
  ok &= cls(DistributionSpec::geometric(0.9)) == Classification::PositiveRecurrent;
  ok &= cls(DistributionSpec::uniform(4)) == Classification::PositiveRecurrent;
  ok &= cls(DistributionSpec::two_point(7, 0.3)) ==
        Classification::PositiveRecurrent;
  report(5, "recurrence classification by radius tail", ok,
         "power c = 0.5 / 1 / 2 and lighter tails");
}

// ---- 6: uncovered census vs the q-series --------------------------------

void criterion_census() {
  Timer t;
  bool ok = true;
  const auto spec = heavy_tail_spec();
  const double series = 2.82362312797;  // sum of q_m, frozen from the series

  pf::percolation::CensusOptions opt;
  opt.workers = 8;
  const auto line = pf::percolation::uncovered_census(
      Window::half_lattice(1, 10000), spec, 10000, 606, opt);
  const double rel = std::fabs(line.mean - series) / series;
  if (rel > 0.05) ok = false;
  if (!line.geometric.attempted || line.geometric.p_value <= 0.001) ok = false;
  const double censored_frac =
      static_cast<double>(line.censored_trials) / 10000.0;
  if (censored_frac >= 0.01) ok = false;

  const auto plane = pf::percolation::uncovered_census(
      Window::half_lattice(2, 64), spec, 10000, 607, opt);
  const double bound = line.mean * line.mean +
                       3.0 * std::sqrt(plane.variance / 10000.0);
  if (plane.mean > bound) ok = false;

  const double sec = t.seconds();
  if (sec >= 120.0) ok = false;
  report(6, "uncovered count: mean, geometric shape, product bound", ok,
         fmt("line mean %.4f vs %.4f (rel %.3f), fit p %.3f, censored %.4f, "
             "plane mean %.3f <= %.3f, %.1f s",
             line.mean, series, rel, line.geometric.p_value, censored_frac,
             plane.mean, bound, sec));
}

// ---- 7: scaling limit of the chain --------------------------------------

void criterion_scaling_limit() {
  Timer t;
  const auto spec = heavy_tail_spec();
  const std::uint64_t paths = 10000, steps = 10000;
  std::vector<std::int64_t> finals(paths);
  const std::uint64_t master = pf::rng::derive(707, pf::rng::tag("accept.limit"));
  pf::parallel::run_trials(paths, 8, [&](std::size_t i) {
    const std::uint64_t key =
        pf::rng::derive(master, static_cast<std::uint64_t>(i));
    std::int64_t x = 0;
    for (std::uint64_t k = 0; k < steps; ++k) {
      const std::int64_t y = pf::dist::sample_at(spec, key, k);
      x = x - 1 > y ? x - 1 : y;
    }
    finals[i] = x;
  });
  bool ok = true;
  std::string detail;
  for (double y : {0.5, 1.0, 2.0}) {
    const double cut = y * static_cast<double>(steps);
    std::uint64_t below = 0;
    for (std::int64_t v : finals)
      if (static_cast<double>(v) <= cut) ++below;
    const double emp = static_cast<double>(below) / static_cast<double>(paths);
    const double lim = pf::catalog::inverse_beta_cdf(2.0, y);
    detail += fmt("y=%.1f: %.4f vs %.4f  ", y, emp, lim);
    if (std::fabs(emp - lim) > 0.02) ok = false;
  }
  report(7, "rescaled chain approaches the inverse-Beta law", ok,
         detail + fmt("(%.1f s)", t.seconds()));
}

// ---- 8: tree row probabilities vs Monte Carlo ----------------------------

void criterion_tree_rows() {
  Timer t;
  bool ok = true;
  std::string worst;
  struct Case { DistributionSpec spec; int arity; const char* name; };
  const Case cases[]{
      {DistributionSpec::uniform(2), 2, "support {0,1}, n=2"},
      {DistributionSpec::geometric(0.5), 2, "geometric 1/2, n=2"},
      {DistributionSpec::geometric(0.5), 3, "geometric 1/2, n=3"},
  };
  double worst_sigmas = 0.0;
  for (const auto& c : cases) {
    const auto seq = pf::tree::r_recurrence(c.spec, c.arity, 10);
    for (int m = 0; m <= 10; ++m) {
      const auto probe =
          pf::tree::tree_uncovered_probe(c.spec, c.arity, m, 100000, 808, 8);
      const double r = seq.r[static_cast<std::size_t>(m)];
      const double sigma = std::sqrt(r * (1.0 - r) / 100000.0);
      const double dev =
          sigma > 0.0 ? std::fabs(probe.r_hat - r) / sigma
                      : (probe.r_hat == r ? 0.0 : 1e9);
      if (dev > worst_sigmas) {
        worst_sigmas = dev;
        worst = fmt("%s m=%d: %.5f vs %.5f", c.name, m, probe.r_hat, r);
      }
      if (dev > 3.0) ok = false;
    }
    // Trend: the analytic sequence climbs to 1.
    const auto longseq = pf::tree::r_recurrence(c.spec, c.arity, 60);
    for (std::size_t m = 0; m + 1 < longseq.r.size(); ++m)
      if (longseq.r[m + 1] < longseq.r[m] - 1e-12) ok = false;
    if (std::fabs(longseq.r.back() - 1.0) > 1e-6) ok = false;
  }
  // Crossing bound: with F(0) in {0.6, 0.75} and F = 1 beyond, every row
  // probability stays above the bounding fixed point 2 - 1/F, and the
  // saturated tail drives r to 1.
  for (double f0 : {0.6, 0.75}) {
    const auto spec = DistributionSpec::finite({f0, 1.0 - f0});
    const auto seq = pf::tree::r_recurrence(spec, 2, 40);
    const double x_lower = pf::tree::fixed_point(f0, 2);
    for (double r : seq.r)
      if (r < x_lower - 1e-9) ok = false;
    if (seq.r.back() < pf::tree::fixed_point(1.0, 2) - 1e-9) ok = false;
  }
  report(8, "tree uncovered-row probabilities match simulation", ok,
         fmt("worst %.2f sigma at %s, %.1f s", worst_sigmas, worst.c_str(),
             t.seconds()));
}

// ---- 9: dyadic closed form ----------------------------------------------

void criterion_closed_form() {
  bool ok = true;
  double worst = 0.0;
  const std::vector<DistributionSpec> specs{
      DistributionSpec::finite({0.3, 0.7}), DistributionSpec::uniform(2),
      DistributionSpec::finite({0.6, 0.4}), DistributionSpec::finite({0.9, 0.1}),
      DistributionSpec::uniform(3)};
  for (const auto& spec : specs) {
    const auto rec = pf::tree::r_recurrence(spec, 2, 40);
    const auto closed = pf::tree::logistic_closed_form(spec, 40);
    const auto n0 = static_cast<std::size_t>(*spec.support_top());
    for (std::size_t m = n0; m <= 40; ++m) {
      const double d = std::fabs(closed.seq.log1m[m] - rec.log1m[m]);
      if (d > worst) worst = d;
    }
  }
  if (worst > 1e-12) ok = false;
  report(9, "doubling closed form tracks the recurrence in log space", ok,
         fmt("max |ln(1-r) gap| %.2e up to m = 40", worst));
}

// ---- 10: mean-matrix spectral radius and branching .----------------------

void criterion_spectral_grid() {
  Timer t;
  bool ok = true;
  // Frozen roots of the characteristic polynomial on the grid.
  const double frozen[3][3] = {
      {0.63218253804964775, 0.809016994374947424, 0.926628129733539794},
      {0.795906404716743012, 0.919643377607080566, 0.979913780286977969},
      {0.879755358580877879, 0.963780987741462652, 0.994196443210252585}};
  const int ns[]{2, 3, 4};
  const double ps[]{0.3, 0.5, 0.7};
  double worst_rho = 0.0, worst_bis = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int n = ns[i];
      const double p = ps[j];
      const auto spec = DistributionSpec::two_point(n, p);
      const double rho =
          pf::tree::rho_mean_matrix(spec, static_cast<std::size_t>(n), 1e-13);
      const double dr = std::fabs(rho - frozen[i][j]);
      if (dr > worst_rho) worst_rho = dr;
      // Independent root: bisect the characteristic polynomial just below 1.
      const double root = pf::numerics::bisect(
          [&](double z) { return pf::tree::char_poly(n, p, z); },
          p + 1e-12, 1.0 - 1e-12, 1e-12);
      const double db = std::fabs(root - rho);
      if (db > worst_bis) worst_bis = db;
    }
  }
  if (worst_rho > 1e-9 || worst_bis > 1e-9) ok = false;
  // Golden-section special value at (2, 1/2).
  const double golden = (0.5 + std::sqrt(1.25)) / 2.0;
  const double dg = std::fabs(
      pf::tree::rho_mean_matrix(DistributionSpec::two_point(2, 0.5), 2, 1e-13) -
      golden);
  if (dg > 1e-9) ok = false;

  // Branching survival must agree with the rho vs 1/n verdict at 5 sigma.
  std::string branch;
  for (int i = 0; i < 3 && ok; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int n = ns[i];
      const double p = ps[j];
      const auto est = pf::tree::branching_survival(
          DistributionSpec::two_point(n, p), n, 200, 300, 909, 100000, 8);
      const double se = est.std_error > 0.0 ? est.std_error : 1.0 / 300.0;
      // Supercritical everywhere on this grid: survival must clear zero.
      if (est.fraction <= 5.0 * se) {
        ok = false;
        branch = fmt("grid n=%d p=%.1f fraction %.3f", n, p, est.fraction);
      }
    }
  }
  // One-type cases: mu_1 = 0.4 dies out, mu_1 = 0.6 survives (prob 1/3).
  const auto sub = pf::tree::branching_survival(
      DistributionSpec::two_point(1, 0.4), 2, 200, 300, 910, 100000, 8);
  if (sub.survived != 0) ok = false;
  const auto sup = pf::tree::branching_survival(
      DistributionSpec::two_point(1, 0.6), 2, 200, 300, 911, 100000, 8);
  const double se = sup.std_error > 0.0 ? sup.std_error : 1.0 / 300.0;
  if (sup.fraction <= 5.0 * se) ok = false;
  const double sec = t.seconds();
  if (sec >= 120.0) ok = false;
  report(10, "spectral radius grid and branching verdicts", ok,
         fmt("max rho err %.2e, bisection gap %.2e, sub %.0f sup %.3f%s, %.1f s",
             worst_rho, worst_bis, static_cast<double>(sub.survived),
             sup.fraction, branch.empty() ? "" : (", " + branch).c_str(), sec));
}

// ---- 11: worker-count independence ---------------------------------------

void criterion_determinism() {
  Timer t;
  bool ok = true;
  std::string what;
  const auto spec = DistributionSpec::geometric(0.5);

  std::vector<std::uint64_t> census_ref;
  std::vector<std::uint8_t> surv_ref, probe_ref, urn_ref;
  for (int workers : {1, 4, 8}) {
    pf::percolation::CensusOptions opt;
    opt.workers = workers;
    const auto census = pf::percolation::uncovered_census(
        Window::half_lattice(1, 2048), spec, 256, 1111, opt);
    if (workers == 1) census_ref = census.counts;
    else if (census.counts != census_ref) { ok = false; what = "census"; }

    const auto surv = pf::tree::branching_survival(
        DistributionSpec::two_point(2, 0.5), 2, 60, 256, 1112, 100000, workers);
    if (workers == 1) surv_ref = surv.per_trial;
    else if (surv.per_trial != surv_ref) { ok = false; what = "branching"; }

    const auto probe =
        pf::tree::tree_uncovered_probe(spec, 2, 6, 4096, 1113, workers);
    if (workers == 1) probe_ref = probe.per_trial;
    else if (probe.per_trial != probe_ref) { ok = false; what = "probe"; }

    const auto urn = pf::catalog::naor_urn(5, 4096, 1114, workers);
    if (workers == 1) urn_ref = urn.per_trial;
    else if (urn.per_trial != urn_ref) { ok = false; what = "urn"; }
  }
  // Single-threaded components replay exactly by construction; spot-check.
  const auto a = pf::exchange::simulate_path(spec, 10000, 1115);
  const auto b = pf::exchange::simulate_path(spec, 10000, 1115);
  if (a.states != b.states) { ok = false; what = "path"; }
  report(11, "per-trial records are identical under 1, 4, 8 workers", ok,
         ok ? fmt("census, branching, probe, urn replayed, %.1f s", t.seconds())
            : ("first mismatch: " + what));
}

}  // namespace

int main() {
  std::printf("acceptance: covering processes and the exchange chain\n");
  criterion_coupling();
  criterion_uniform_stationary();
  criterion_geometric_stationary();
  criterion_urn();
  criterion_classification();
  criterion_census();
  criterion_scaling_limit();
  criterion_tree_rows();
  criterion_closed_form();
  criterion_spectral_grid();
  criterion_determinism();
  if (failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
