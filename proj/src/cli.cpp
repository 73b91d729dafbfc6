#include "ninf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "ninf/envelope.hpp"
#include "ninf/io.hpp"

namespace ninf {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Appends "--key=value" for every config-file entry not already given as a flag.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    else if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) return args;
  auto given = [&](const std::string& key) {
    for (const auto& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_key_values(in, path))
    if (!given(key)) extra.push_back("--" + key + "=" + value);
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--config", cfg.config_path, "flat key = value file; flags override it")->check(CLI::ExistingFile);
  sub->add_option("--domain", cfg.domain_path, "domain description file")->required()->check(CLI::ExistingFile);
  sub->add_option("--f", cfg.f, "constant source term");
  sub->add_option("--eps", cfg.scheme.eps, "ring radius");
  sub->add_option("--m", cfg.scheme.m, "ring directions (2D)");
  sub->add_option("--tol", cfg.scheme.tol, "update tolerance (0: 1e-9 diam^2)");
  sub->add_option("--max-iter", cfg.scheme.max_iter, "sweep cap");
  sub->add_option("--sweep", cfg.scheme.sweep, "gs or jacobi")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Sweep>{{"gs", Sweep::gauss_seidel}, {"jacobi", Sweep::jacobi}}))
      ->option_text("gs|jacobi");
  sub->add_option("--h", cfg.scheme.h, "lattice spacing (0: eps/2.5 in 2D, eps/2 in 1D)");
  sub->add_option("--threads", cfg.scheme.threads, "worker threads");
  sub->add_option("--out", cfg.out_dir, "output directory");
}

void add_analysis(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--refinements", cfg.refinements, "solves at eps, 2 eps, 4 eps, ... (finest last)");
  sub->add_option("--shrink", cfg.shrink, "K = domain scaled about its centroid");
  sub->add_option("--field", cfg.field_path, "check a stored field instead of solving")->check(CLI::ExistingFile);
}

void validate(const RunConfig& cfg, const ConvexDomain& d) {
  const auto& p = cfg.scheme;
  if (!std::isfinite(cfg.f)) throw ConfigError("f", "must be finite");
  if (cfg.f < 0.0) throw ConfigError("f", "negative source");
  if (!(p.eps > 0.0)) throw ConfigError("eps", "must be positive");
  if (p.h < 0.0) throw ConfigError("h", "must be nonnegative");
  const double h = p.spacing(d.dimension());
  if (!(h < d.diameter() / 4.0)) throw ConfigError(p.h > 0.0 ? "h" : "eps", "lattice spacing " + fmt17(h) + " must stay below diam/4");
  if (p.eps < 2.0 * h * (1.0 - 1e-12)) throw ConfigError("h", "eps must be at least 2 h");
  if (d.dimension() == 2 && (p.m < 8 || p.m % 2 != 0)) throw ConfigError("m", "needs an even count >= 8");
  if (p.tol < 0.0) throw ConfigError("tol", "must be nonnegative");
  if (p.max_iter < 1) throw ConfigError("max-iter", "must be positive");
  if (p.threads < 1) throw ConfigError("threads", "must be positive");
  if (cfg.refinements < 1) throw ConfigError("refinements", "must be positive");
  if (!(cfg.shrink > 0.0 && cfg.shrink < 1.0)) throw ConfigError("shrink", "must lie in (0, 1)");
}

SchemeParams coarsened(const SchemeParams& p, int dimension, double factor) {
  SchemeParams q = p;
  q.h = p.spacing(dimension) * factor;
  q.eps = p.eps * factor;
  return q;
}

std::vector<ScalarField> fields_for(const RunConfig& cfg, const ConvexDomain& d) {
  if (!cfg.field_path.empty()) return {load_field(cfg.field_path, d)};
  std::vector<ScalarField> fields;
  for (int k = 0; k < cfg.refinements; ++k) {
    const double factor = std::ldexp(1.0, cfg.refinements - 1 - k);
    const auto p = coarsened(cfg.scheme, d.dimension(), factor);
    RunConfig level = cfg;
    level.scheme = p;
    validate(level, d);
    fields.push_back(solve(d, SourceTerm::constant(cfg.f), p));
  }
  return fields;
}

fs::path out_file(const RunConfig& cfg, const std::string& explicit_path, const std::string& name) {
  if (!explicit_path.empty()) return explicit_path;
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const auto d = read_domain_file(cfg.domain_path);
  validate(cfg, d);
  const auto log_path = out_file(cfg, "", "convergence.log");
  std::ofstream log(log_path);
  if (!log) throw ConfigError("out", "cannot write " + log_path.string());
  int sweeps = 0;
  double last = 0.0;
  const auto u = solve(d, SourceTerm::constant(cfg.f), cfg.scheme, [&](int it, double diff) {
    log << it << ' ' << fmt17(diff) << '\n';
    sweeps = it;
    last = diff;
  });
  const auto path = out_file(cfg, cfg.output_path, "field.txt");
  write_field(path.string(), u);
  out << "field: " << path.string() << '\n';
  out << "sweeps: " << sweeps << '\n';
  out << "final_update: " << fmt17(last) << '\n';
  out << "max_value: " << fmt17(u.sup_inside()) << '\n';
  return exit_ok;
}

int cmd_envelope(const RunConfig& cfg, std::ostream& out) {
  const auto d = read_domain_file(cfg.domain_path);
  validate(cfg, d);
  const auto u = cfg.field_path.empty() ? solve(d, SourceTerm::constant(cfg.f), cfg.scheme) : load_field(cfg.field_path, d);
  const double tol = 2.0 * geometric_tolerance(u);
  const auto tf = transform(u);
  const auto env = convex_envelope(tf.w, tol);
  double gap = 0.0;
  for (int n : u.grid().inside_nodes()) gap = std::max(gap, tf.w[n] - env.values[n]);
  const auto interiority = witness_interiority(env.witness, u.grid());
  const auto env_path = out_file(cfg, "", "envelope.txt");
  const auto wit_path = out_file(cfg, "", "witness.txt");
  write_field(env_path.string(), env.values);
  write_witness(wit_path.string(), env.witness, u.grid());
  out << "envelope: " << env_path.string() << '\n';
  out << "witness: " << wit_path.string() << '\n';
  out << "envelope_defect: " << fmt17(gap) << '\n';
  out << "tolerance: " << fmt17(tol) << '\n';
  out << "boundary_witness_nodes: " << interiority.touching_nodes.size() << '\n';
  return exit_ok;
}

int cmd_tow(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto d = read_domain_file(cfg.domain_path);
  validate(cfg, d);
  GameConfig g = cfg.game;
  g.eps = cfg.scheme.eps;
  g.m = cfg.scheme.m;
  g.threads = cfg.scheme.threads;
  if (g.trials < 1) throw ConfigError("trials", "must be positive");
  if (g.max_steps < 0) throw ConfigError("max-steps", "must be nonnegative");
  Point start = d.centroid();
  if (!cfg.start.empty()) {
    if (cfg.start.size() > 2) throw ConfigError("start", "expects one or two coordinates");
    start = Point(cfg.start[0], cfg.start.size() > 1 ? cfg.start[1] : 0.0);
    if (d.signed_distance(start) > 1e-12 * d.diameter()) throw ConfigError("start", "lies outside the domain");
  }
  std::optional<ScalarField> guide;
  if (g.strategy == Strategy::greedy_on_field) {
    guide = cfg.guide_path.empty() ? solve(d, SourceTerm::constant(cfg.f), cfg.scheme) : load_field(cfg.guide_path, d);
  }
  const auto r = play(d, start, SourceTerm::constant(cfg.f), g, guide ? &*guide : nullptr);
  out << "mean_payoff: " << fmt17(r.mean_payoff) << '\n';
  out << "std_error: " << fmt17(r.std_error) << '\n';
  out << "exit_rate: " << fmt17(r.exit_rate) << '\n';
  out << "trials: " << r.trials << '\n';
  out << "mean_steps: " << fmt17(r.mean_steps) << '\n';
  if (r.non_exit()) {
    err << "warning: NonExit: fraction " << fmt17(1.0 - r.exit_rate) << " of trajectories hit max_steps\n";
    if (r.exit_rate < 0.99 && !cfg.allow_nonexit) return exit_numeric;
  }
  return exit_ok;
}

int cmd_checks(const RunConfig& cfg, std::ostream& out, bool write_files) {
  const auto d = read_domain_file(cfg.domain_path);
  validate(cfg, d);
  ReportInput input{d, fields_for(cfg, d), cfg.f, cfg.scheme, cfg.shrink};
  const auto report = run_checks(input, cfg.checks.empty() ? all_checks() : cfg.checks);
  if (write_files) {
    const auto path = out_file(cfg, cfg.output_path, "report.txt");
    std::ofstream file(path);
    if (!file) throw ConfigError("report", "cannot write " + path.string());
    write_report(file, report);
    out << "report: " << path.string() << '\n';
    if (!cfg.svg_path.empty()) {
      std::ofstream svg(cfg.svg_path);
      if (!svg) throw ConfigError("svg", "cannot write " + cfg.svg_path);
      write_svg(svg, report);
    }
  }
  for (const auto& v : report.verdicts) {
    out << check_name(v.check) << ": " << (v.pass ? "pass" : "fail") << " value=" << fmt17(v.value)
        << " tolerance=" << fmt17(v.tolerance);
    if (!v.note.empty()) out << " (" << v.note << ')';
    out << '\n';
  }
  return report.all_pass() ? exit_ok : exit_verification;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalized infinity Laplacian solver and regularity verifier", "ninf"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  RunConfig cfg;

  auto* solve_cmd = app.add_subcommand("solve", "solve and write the field file");
  add_common(solve_cmd, cfg);
  solve_cmd->add_option("--output", cfg.output_path, "field file (default <out>/field.txt)");

  auto* env_cmd = app.add_subcommand("envelope", "convex envelope of w = -sqrt(u) with witnesses");
  add_common(env_cmd, cfg);
  env_cmd->add_option("--field", cfg.field_path, "use a stored field")->check(CLI::ExistingFile);

  auto* tow_cmd = app.add_subcommand("tow", "Monte Carlo tug-of-war value");
  add_common(tow_cmd, cfg);
  tow_cmd->add_option("--start", cfg.start, "start point (default: centroid)")->expected(1, 2);
  tow_cmd->add_option("--trials", cfg.game.trials, "trajectories");
  tow_cmd->add_option("--seed", cfg.game.seed, "64-bit seed");
  tow_cmd->add_option("--max-steps", cfg.game.max_steps, "step cap (0: 50 (diam/eps)^2)");
  tow_cmd->add_option("--strategy", cfg.game.strategy, "greedy or radial")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Strategy>{{"greedy", Strategy::greedy_on_field}, {"radial", Strategy::radial}}))
      ->option_text("greedy|radial");
  tow_cmd->add_option("--guide", cfg.guide_path, "guide field (default: solve)")->check(CLI::ExistingFile);
  tow_cmd->add_flag("--allow-nonexit", cfg.allow_nonexit, "do not fail when trajectories hit the cap");

  std::map<std::string, Check> names;
  for (Check c : all_checks()) names.emplace(std::string(check_name(c)), c);

  auto* verify_cmd = app.add_subcommand("verify", "run one check");
  add_common(verify_cmd, cfg);
  add_analysis(verify_cmd, cfg);
  Check single = Check::concavity;
  verify_cmd->add_option("check", single, "one of concavity, envelope, cones, quadcone, semiconcavity, gradient, blowup, decay, comparison, singularity")->required()->transform(CLI::CheckedTransformer(names))->option_text("CHECK");

  auto* report_cmd = app.add_subcommand("report", "run checks and write the regularity report");
  add_common(report_cmd, cfg);
  add_analysis(report_cmd, cfg);
  report_cmd->add_option("--checks", cfg.checks, "comma separated subset of concavity, envelope, cones, quadcone, semiconcavity, gradient, blowup, decay, comparison, singularity (default: all)")
      ->delimiter(',')
      ->transform(CLI::CheckedTransformer(names))
      ->option_text("CHECK,...");
  report_cmd->add_option("--report", cfg.output_path, "report file (default <out>/report.txt)");
  report_cmd->add_option("--svg", cfg.svg_path, "log-log plot of defects against h");

  std::vector<std::string> args;
  try {
    args = expand_config({argv + 1, argv + argc});
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*solve_cmd) return cmd_solve(cfg, out);
    if (*env_cmd) return cmd_envelope(cfg, out);
    if (*tow_cmd) return cmd_tow(cfg, out, err);
    if (*verify_cmd) {
      cfg.checks = {single};
      return cmd_checks(cfg, out, false);
    }
    return cmd_checks(cfg, out, true);
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  } catch (const NegativeInput& e) {
    err << "error: field: " << e.what() << '\n';
    return exit_config;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  }
}

}  // namespace ninf
