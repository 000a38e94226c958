// percoflow: covering processes on directed lattice and tree windows, the
// coupled exchange chain, and their closed-form reference laws.
//
// Subcommands: exchange, perc, tree, catalog, verify. Every run is a pure
// function of (config, seed); per-trial streams are derived from the master
// seed and the trial index, so results are byte-identical for any worker
// count. Exit codes: 0 success, 2 invalid configuration, 3 numerical
// non-convergence, 4 property-check failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percoflow/percoflow.hpp"
#include "percoflow/spec_io.hpp"

namespace {

namespace pf = percoflow;
using nlohmann::json;

constexpr const char* kVersion = "percoflow 0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- config loading ----------------------------------------------------

pf::dist::DistributionSpec load_spec(const std::string& text) {
  try {
    if (text.find(':') != std::string::npos)
      return pf::spec_io::parse_inline(text);
    std::ifstream in(text);
    if (!in) throw ConfigError("cannot open spec file '" + text + "'");
    json j = json::parse(in);
    return pf::spec_io::from_json(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("bad distribution spec '" + text + "': " + e.what());
  }
}

// Window mini-language: half:dim=1,side=1000 | full:dim=2,side=20,margin=40
// | tree:arity=2,depth=12
pf::graphs::Window parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("window: expected '<family>:<params>', got '" + text + "'");
  const std::string family = text.substr(0, colon);
  try {
    const auto kv = pf::spec_io::detail::parse_kv(text.substr(colon + 1));
    const auto want = [&](const char* key) {
      return static_cast<std::int64_t>(pf::spec_io::detail::want_num(kv, key));
    };
    if (family == "half")
      return pf::graphs::Window::half_lattice(static_cast<int>(want("dim")),
                                              want("side"));
    if (family == "full")
      return pf::graphs::Window::full_lattice(static_cast<int>(want("dim")),
                                              want("side"), want("margin"));
    if (family == "tree")
      return pf::graphs::Window::directed_tree(static_cast<int>(want("arity")),
                                               static_cast<int>(want("depth")));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad window '") + text + "': " + e.what());
  }
  throw ConfigError("window: unknown family '" + family + "'");
}

// ---- output helpers ----------------------------------------------------

struct RunContext {
  std::string subcommand;
  json config = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json summary(json results) const {
    json out;
    out["tool"] = kVersion;
    out["subcommand"] = subcommand;
    out["config"] = config;
    out["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    out["results"] = std::move(results);
    return out;
  }
};

// Every CSV starts with the config echo as comment lines.
void write_csv_header(std::ostream& os, const RunContext& ctx,
                      const std::string& columns) {
  os << "# " << kVersion << "\n";
  os << "# subcommand=" << ctx.subcommand << "\n";
  for (const auto& [key, value] : ctx.config.items())
    os << "# " << key << "=" << value.dump() << "\n";
  os << columns << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

void emit(const RunContext& ctx, json results) {
  std::cout << ctx.summary(std::move(results)).dump(2) << "\n";
}

// ---- shared flag bundle -------------------------------------------------

struct CommonOpts {
  std::string dist;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1000;
  std::string window;
  int depth = 8;
  int arity = 2;
  std::int64_t size = 0;  // 0 = default truncation
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_dist = true) {
  auto* d = cmd->add_option("--dist", o.dist,
                            "radius law: inline spec (e.g. geometric:p=0.5) or "
                            "JSON file path");
  if (need_dist) d->required();
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  cmd->add_option("--window", o.window,
                  "window, e.g. half:dim=1,side=1000 or "
                  "full:dim=2,side=20,margin=40 or tree:arity=2,depth=10");
  cmd->add_option("--depth", o.depth, "tree depth");
  cmd->add_option("--arity", o.arity, "tree arity");
  cmd->add_option("--size", o.size, "truncation size (0 = default)");
  cmd->add_option("--tol", o.tol, "tolerance");
  cmd->add_option("--out", o.out, "CSV output path");
  cmd->add_option("--format", o.format, "stdout payload: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--workers", o.workers, "worker threads (results identical)");
}

std::size_t truncation(const CommonOpts& o, const pf::dist::DistributionSpec& s) {
  return o.size > 0 ? static_cast<std::size_t>(o.size)
                    : pf::exchange::default_truncation_size(s);
}

// ---- subcommand bodies ---------------------------------------------------

int run_exchange(const std::string& verb, const CommonOpts& o,
                 std::uint64_t steps, std::int64_t x0, std::int64_t green_x,
                 std::int64_t green_y, double green_z) {
  const auto spec = load_spec(o.dist);
  RunContext ctx;
  ctx.subcommand = "exchange " + verb;
  ctx.config = {{"dist", pf::spec_io::to_json(spec)}, {"seed", o.seed}};

  if (verb == "path") {
    ctx.config["steps"] = steps;
    ctx.config["x0"] = x0;
    const auto path = pf::exchange::simulate_path(spec, steps, o.seed, x0);
    if (!o.out.empty() || o.format == "csv") {
      std::ofstream file;
      std::ostream& os = o.out.empty() ? std::cout : (file = open_out(o.out));
      write_csv_header(os, ctx, "step,state,draw");
      for (std::size_t k = 0; k < path.states.size(); ++k) {
        os << k << ',' << path.states[k] << ',';
        if (k > 0) os << path.draws[k - 1];
        os << '\n';
      }
      if (o.out.empty()) return 0;
    }
    const auto occ = pf::exchange::occupation_distribution(
        path.states, truncation(o, spec));
    emit(ctx, {{"final_state", path.states.back()},
               {"occupation", occ},
               {"classification", pf::exchange::to_string(pf::exchange::classify(spec))}});
    return 0;
  }
  if (verb == "matrix") {
    const std::size_t size = truncation(o, spec);
    ctx.config["size"] = size;
    const auto P = pf::exchange::transition_matrix(spec, size);
    std::ofstream file;
    std::ostream& os = o.out.empty() ? std::cout : (file = open_out(o.out));
    write_csv_header(os, ctx, "x,y,p");
    os.precision(17);
    for (std::size_t x = 0; x < size; ++x)
      for (std::size_t y = 0; y < size; ++y)
        if (P.at(x, y) != 0.0)
          os << x << ',' << y << ',' << P.at(x, y) << '\n';
    if (!o.out.empty())
      emit(ctx, {{"size", size}, {"exact", P.exact}});
    return 0;
  }
  if (verb == "stationary") {
    const std::size_t size = truncation(o, spec);
    ctx.config["size"] = size;
    const auto tau = pf::exchange::stationary_measure(spec, size);
    std::ofstream file;
    std::ostream& os = o.out.empty() && o.format == "csv"
                           ? std::cout
                           : (o.out.empty() ? file : (file = open_out(o.out)));
    if (!o.out.empty() || o.format == "csv") {
      write_csv_header(os, ctx, "x,tau_raw,tau_normalized");
      os.precision(17);
      for (std::size_t x = 0; x < tau.raw.size(); ++x) {
        os << x << ',' << tau.raw[x] << ',';
        if (tau.normalizable) os << tau.normalized[x];
        os << '\n';
      }
    }
    if (o.out.empty() && o.format == "csv") return 0;
    emit(ctx, {{"normalizable", tau.normalizable},
               {"tau0", tau.normalizable ? tau.normalized[0] : 0.0},
               {"classification", pf::exchange::to_string(pf::exchange::classify(spec))}});
    return 0;
  }
  if (verb == "green") {
    const std::size_t size = truncation(o, spec);
    ctx.config.update({{"x", green_x}, {"y", green_y}, {"z", green_z},
                       {"N", steps}, {"size", size}});
    const double g = pf::exchange::green_partial(spec, green_x, green_y,
                                                 green_z, steps, size);
    emit(ctx, {{"green_partial", g}});
    return 0;
  }
  if (verb == "rho") {
    const std::size_t size = truncation(o, spec);
    ctx.config["size"] = size;
    ctx.config["tol"] = o.tol;
    emit(ctx, {{"rho", pf::exchange::spectral_radius(spec, size, o.tol)}});
    return 0;
  }
  if (verb == "classify") {
    emit(ctx, {{"classification",
                pf::exchange::to_string(pf::exchange::classify(spec))}});
    return 0;
  }
  throw ConfigError("exchange: unknown verb '" + verb + "'");
}

int run_perc(const std::string& verb, const CommonOpts& o, int dim,
             bool clusters) {
  const auto spec = load_spec(o.dist);
  RunContext ctx;
  ctx.subcommand = "perc " + verb;
  ctx.config = {{"dist", pf::spec_io::to_json(spec)}, {"seed", o.seed}};

  if (verb == "census") {
    if (o.window.empty()) throw ConfigError("perc census: --window required");
    const auto w = parse_window(o.window);
    ctx.config.update({{"window", o.window}, {"trials", o.trials},
                       {"workers", o.workers}});
    pf::percolation::CensusOptions opts;
    opts.workers = o.workers;
    opts.count_clusters = clusters;
    pf::percolation::UncoveredStats stats;
    try {
      stats = pf::percolation::uncovered_census(w, spec, o.trials, o.seed, opts);
    } catch (const pf::percolation::WindowRefused& e) {
      emit(ctx, {{"refused", true},
                 {"reason", e.what()},
                 {"verdict", pf::percolation::to_string(e.verdict)}});
      return 2;
    }
    if (!o.out.empty() || o.format == "csv") {
      std::ofstream file;
      std::ostream& os = o.out.empty() ? std::cout : (file = open_out(o.out));
      write_csv_header(os, ctx, "trial_id,uncovered_count,censored");
      for (std::uint64_t t = 0; t < stats.trials; ++t)
        os << t << ',' << stats.counts[t] << ','
           << static_cast<int>(stats.censored[t]) << '\n';
      if (o.out.empty()) return 0;
    }
    // q-series comparison is meaningful on the half line.
    json results = {{"mean", stats.mean},
                    {"variance", stats.variance},
                    {"histogram", stats.histogram},
                    {"censored_trials", stats.censored_trials}};
    if (w.family() == pf::graphs::Family::HalfLattice && w.dim() == 1) {
      const auto line = pf::percolation::expected_uncovered_line(
          spec, static_cast<std::size_t>(w.high()));
      results["expected_uncovered"] = line.partial_sum;
      results["series_converges"] = line.converged;
      if (stats.geometric.attempted) {
        results["geometric_fit"] = {{"p_hat", stats.geometric.p_hat},
                                    {"chi2", stats.geometric.chi2},
                                    {"dof", stats.geometric.dof},
                                    {"p_value", stats.geometric.p_value}};
      }
    }
    if (stats.cluster_stats) {
      results["mean_uncovered_components"] = stats.mean_uncovered_components;
      results["mean_covered_components"] = stats.mean_covered_components;
    }
    emit(ctx, results);
    return 0;
  }
  if (verb == "qseries") {
    const std::size_t m_max = o.size > 0 ? o.size : 64;
    ctx.config["m_max"] = m_max;
    const auto q = pf::percolation::q_sequence(spec, m_max);
    std::ofstream file;
    std::ostream& os = o.out.empty() ? std::cout : (file = open_out(o.out));
    write_csv_header(os, ctx, "m,q_m");
    os.precision(17);
    for (std::size_t m = 0; m < q.size(); ++m) os << m << ',' << q[m] << '\n';
    if (!o.out.empty()) emit(ctx, {{"m_max", m_max}});
    return 0;
  }
  if (verb == "line") {
    const std::size_t m_max = o.size > 0 ? o.size : 10000;
    ctx.config["m_max"] = m_max;
    const auto est = pf::percolation::expected_uncovered_line(spec, m_max);
    emit(ctx, {{"partial_sum", est.partial_sum},
               {"converged", est.converged},
               {"remainder_estimate", est.remainder_estimate}});
    return 0;
  }
  if (verb == "bound") {
    if (o.window.empty()) throw ConfigError("perc bound: --window required");
    const auto w = parse_window(o.window);
    ctx.config["window"] = o.window;
    const double b = pf::percolation::z_truncation_bound(w, spec);
    emit(ctx, {{"bound", b}, {"infinite", !std::isfinite(b)}});
    return 0;
  }
  if (verb == "criterion") {
    ctx.config["dim"] = dim;
    const auto v = pf::percolation::coverage_criterion(spec, dim);
    emit(ctx, {{"verdict", pf::percolation::to_string(v)}});
    return 0;
  }
  throw ConfigError("perc: unknown verb '" + verb + "'");
}

int run_tree(const std::string& verb, const CommonOpts& o,
             std::uint64_t generations, std::uint64_t cap) {
  const auto spec = load_spec(o.dist);
  RunContext ctx;
  ctx.subcommand = "tree " + verb;
  ctx.config = {{"dist", pf::spec_io::to_json(spec)},
                {"arity", o.arity},
                {"seed", o.seed}};

  if (verb == "rseq") {
    ctx.config["m_max"] = o.depth;
    const auto seq = pf::tree::r_recurrence(spec, o.arity,
                                            static_cast<std::size_t>(o.depth));
    // Optional empirical column when trials are requested; the probe cost
    // grows with depth, so cap the probed depth.
    std::vector<double> r_hat(seq.r.size(),
                              std::numeric_limits<double>::quiet_NaN());
    std::vector<double> se(seq.r.size(),
                           std::numeric_limits<double>::quiet_NaN());
    const bool probe = o.trials > 0;
    if (probe) {
      ctx.config["trials"] = o.trials;
      for (std::size_t m = 0; m < seq.r.size() && m <= 14; ++m) {
        const auto res = pf::tree::tree_uncovered_probe(
            spec, o.arity, static_cast<int>(m), o.trials, o.seed, o.workers);
        r_hat[m] = res.r_hat;
        se[m] = res.std_error;
      }
    }
    std::ofstream file;
    std::ostream& os = o.out.empty() ? std::cout : (file = open_out(o.out));
    write_csv_header(os, ctx, "m,r_analytic,r_empirical,stderr");
    os.precision(17);
    for (std::size_t m = 0; m < seq.r.size(); ++m) {
      os << m << ',' << seq.r[m] << ',';
      if (probe && !std::isnan(r_hat[m])) os << r_hat[m];
      os << ',';
      if (probe && !std::isnan(se[m])) os << se[m];
      os << '\n';
    }
    if (!o.out.empty()) emit(ctx, {{"m_max", o.depth}});
    return 0;
  }
  if (verb == "criterion") {
    const std::size_t size = truncation(o, spec);
    ctx.config.update({{"size", size}, {"tol", o.tol}});
    const auto rep = pf::tree::infinite_path_criterion(spec, o.arity, size, o.tol);
    std::cout << "rho=" << rep.rho << " threshold=" << rep.threshold
              << " verdict=" << pf::tree::to_string(rep.verdict) << "\n";
    emit(ctx, {{"rho", rep.rho},
               {"rho_half_size", rep.rho_half_size},
               {"threshold", rep.threshold},
               {"exact", rep.exact},
               {"verdict", pf::tree::to_string(rep.verdict)}});
    return 0;
  }
  if (verb == "branching") {
    ctx.config.update({{"generations", generations},
                       {"trials", o.trials},
                       {"cap", cap},
                       {"workers", o.workers}});
    const auto est = pf::tree::branching_survival(
        spec, o.arity, generations, o.trials, o.seed, cap, o.workers);
    if (!o.out.empty()) {
      auto file = open_out(o.out);
      write_csv_header(file, ctx, "trial_id,survived");
      for (std::uint64_t t = 0; t < est.trials; ++t)
        file << t << ',' << static_cast<int>(est.per_trial[t]) << '\n';
    }
    emit(ctx, {{"survived", est.survived},
               {"trials", est.trials},
               {"fraction", est.fraction},
               {"std_error", est.std_error},
               {"saturated", est.saturated}});
    return 0;
  }
  if (verb == "probe") {
    ctx.config.update({{"depth", o.depth}, {"trials", o.trials},
                       {"workers", o.workers}});
    const auto res = pf::tree::tree_uncovered_probe(spec, o.arity, o.depth,
                                                    o.trials, o.seed, o.workers);
    const auto seq = pf::tree::r_recurrence(
        spec, o.arity, static_cast<std::size_t>(o.depth));
    emit(ctx, {{"r_hat", res.r_hat},
               {"std_error", res.std_error},
               {"r_analytic", seq.r.back()},
               {"hits", res.hits}});
    return 0;
  }
  throw ConfigError("tree: unknown verb '" + verb + "'");
}

int run_catalog(const std::string& verb, const CommonOpts& o, int urn_m,
                double p, std::uint64_t K, double c, double y) {
  RunContext ctx;
  ctx.subcommand = "catalog " + verb;

  if (verb == "urn") {
    ctx.config = {{"m", urn_m}, {"trials", o.trials}, {"seed", o.seed},
                  {"workers", o.workers}};
    const auto res = pf::catalog::naor_urn(urn_m, o.trials, o.seed, o.workers);
    std::ofstream file;
    std::ostream& os = o.out.empty() && o.format == "csv"
                           ? std::cout
                           : (o.out.empty() ? file : (file = open_out(o.out)));
    if (!o.out.empty() || o.format == "csv") {
      write_csv_header(os, ctx, "j,empirical,exact");
      os.precision(17);
      for (std::size_t j = 0; j < res.empirical.size(); ++j)
        os << j << ',' << res.empirical[j] << ',' << res.exact[j] << '\n';
    }
    if (o.out.empty() && o.format == "csv") return 0;
    emit(ctx, {{"tv_distance", res.tv_distance}});
    return 0;
  }
  if (verb == "euler") {
    ctx.config = {{"p", p}, {"K", K}};
    const auto law = pf::catalog::euler_distribution(p, K);
    std::ofstream file;
    std::ostream& os = o.out.empty() && o.format == "csv"
                           ? std::cout
                           : (o.out.empty() ? file : (file = open_out(o.out)));
    if (!o.out.empty() || o.format == "csv") {
      write_csv_header(os, ctx, "n,tau");
      os.precision(17);
      for (std::size_t n = 0; n < law.tau.size(); ++n)
        os << n << ',' << law.tau[n] << '\n';
    }
    if (o.out.empty() && o.format == "csv") return 0;
    emit(ctx, {{"tau0", law.tau0},
               {"phi", pf::catalog::euler_phi(p)},
               {"identity_residual", law.identity_residual}});
    return 0;
  }
  if (verb == "invbeta") {
    ctx.config = {{"c", c}, {"y", y}};
    emit(ctx, {{"cdf", pf::catalog::inverse_beta_cdf(c, y)}});
    return 0;
  }
  throw ConfigError("catalog: unknown verb '" + verb + "'");
}

int run_verify(const CommonOpts& o, bool coupling, std::uint64_t steps) {
  RunContext ctx;
  ctx.subcommand = "verify";
  if (!coupling) throw ConfigError("verify: choose a check (--coupling)");
  // Default spec set covers all three tail models.
  std::vector<std::pair<std::string, std::string>> specs;
  if (!o.dist.empty()) {
    specs.emplace_back("given", o.dist);
  } else {
    specs.emplace_back("finite", "uniform:m=4");
    specs.emplace_back("geometric", "geometric:p=0.5");
    specs.emplace_back("power", "power:c=2,K=10");
  }
  ctx.config = {{"steps", steps}, {"seed", o.seed}};
  json checks = json::array();
  for (const auto& [name, text] : specs) {
    const auto spec = load_spec(text);
    try {
      pf::percolation::coupling_check(spec, steps, o.seed);
      checks.push_back({{"spec", name}, {"coupling", "ok"}});
    } catch (const pf::percolation::CouplingMismatch& e) {
      checks.push_back({{"spec", name}, {"coupling", e.what()}});
      emit(ctx, {{"checks", checks}, {"failed", true}});
      return 4;
    }
  }
  emit(ctx, {{"checks", checks}, {"failed", false}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covering processes on directed windows and the exchange chain"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts o;
  std::uint64_t steps = 1000;
  int dim = 1;
  std::uint64_t generations = 100;
  std::uint64_t cap = 1000000;
  std::int64_t x0 = 0, green_x = 0, green_y = 0;
  double green_z = 1.0;
  bool clusters = false;
  bool coupling = false;
  int urn_m = 5;
  double euler_p = 0.5, inv_c = 2.0, inv_y = 1.0;
  std::uint64_t euler_k = 64;

  std::string exchange_verb, perc_verb, tree_verb, catalog_verb;

  auto* ex = app.add_subcommand("exchange", "the max(X-1, Y) chain");
  ex->require_subcommand(1);
  for (const char* verb : {"path", "matrix", "stationary", "green", "rho",
                           "classify"}) {
    auto* sub = ex->add_subcommand(verb);
    add_common(sub, o);
    sub->add_option("--steps", steps, "path steps / Green horizon N");
    sub->add_option("--x0", x0, "initial state");
    sub->add_option("--x", green_x, "Green source state");
    sub->add_option("--y", green_y, "Green target state");
    sub->add_option("--z", green_z, "Green weight");
    sub->callback([&, verb] { exchange_verb = verb; });
  }

  auto* pc = app.add_subcommand("perc", "window covering statistics");
  pc->require_subcommand(1);
  for (const char* verb : {"census", "qseries", "line", "bound", "criterion"}) {
    auto* sub = pc->add_subcommand(verb);
    add_common(sub, o);
    sub->add_option("--dim", dim, "ambient dimension for the a.s. criterion");
    sub->add_flag("--clusters", clusters, "tally connected components too");
    sub->callback([&, verb] { perc_verb = verb; });
  }

  auto* tr = app.add_subcommand("tree", "directed-tree covering");
  tr->require_subcommand(1);
  for (const char* verb : {"rseq", "criterion", "branching", "probe"}) {
    auto* sub = tr->add_subcommand(verb);
    add_common(sub, o);
    sub->add_option("--generations", generations, "branching generations");
    sub->add_option("--cap", cap, "branching population cap");
    sub->callback([&, verb] { tree_verb = verb; });
  }

  auto* ct = app.add_subcommand("catalog", "closed-form reference laws");
  ct->require_subcommand(1);
  for (const char* verb : {"urn", "euler", "invbeta"}) {
    auto* sub = ct->add_subcommand(verb);
    add_common(sub, o, /*need_dist=*/false);
    sub->add_option("--m", urn_m, "urn size");
    sub->add_option("--p", euler_p, "q-series parameter");
    sub->add_option("--K", euler_k, "q-series cutoff");
    sub->add_option("--c", inv_c, "power constant");
    sub->add_option("--y", inv_y, "evaluation point");
    sub->callback([&, verb] { catalog_verb = verb; });
  }

  auto* vf = app.add_subcommand("verify", "property checks (exit 4 on failure)");
  add_common(vf, o, /*need_dist=*/false);
  vf->add_flag("--coupling", coupling, "cover sweep vs chain identity");
  vf->add_option("--steps", steps, "sites / chain steps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ex->parsed()) return run_exchange(exchange_verb, o, steps, x0, green_x,
                                          green_y, green_z);
    if (pc->parsed()) return run_perc(perc_verb, o, dim, clusters);
    if (tr->parsed()) return run_tree(tree_verb, o, generations, cap);
    if (ct->parsed())
      return run_catalog(catalog_verb, o, urn_m, euler_p, euler_k, inv_c, inv_y);
    if (vf->parsed()) return run_verify(o, coupling, steps);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const percoflow::numerics::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (last=" << e.last_estimate << ")\n";
    return 3;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
