#include "varcont/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "varcont/acceptance.hpp"
#include "varcont/config.hpp"
#include "varcont/continuation.hpp"
#include "varcont/nonhomogeneous.hpp"
#include "varcont/probes.hpp"
#include "varcont/report.hpp"

namespace varcont::cli {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> lambda;
  bool list = false;
};

std::string path_in(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

GeometryConstants forced_geometry(const RunConfig& cfg, const GridPtr& ball) {
  const auto probes = sobolev_probes(ball, cfg.forced.exponent, cfg.seed, cfg.forced.random_probes);
  return geometry_from_constant(measure_sobolev_constant(probes, cfg.forced.exponent, cfg.forced.q),
                                cfg.forced.exponent);
}

std::string profile_name(double lambda) { return "profiles/profile_lambda_" + format_double(lambda) + ".csv"; }

int cmd_solve(const RunConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err) {
  if (cfg.problem.mode == Mode::Forced) {
    const GridPtr ball = make_forced_grid(cfg);
    const double p = cfg.forced.exponent;
    const GeometryConstants g = forced_geometry(cfg, ball);
    const ForcingTerm f(reference_profile(ball, cfg.forced.profile), cfg.forced.q, cfg.forced.amplitude);
    const ForcedSolution s = solve_forced(ball, p, f, cfg.solver, g);
    if (!s.within_geometry)
      err << "warning: amplitude " << format_double(f.amplitude()) << " exceeds beta = " << format_double(g.beta)
          << "; the mountain-pass geometry is not guaranteed\n";
    out << record_summary(s.record);
    out << "ray_max                  " << format_double(s.ray_max) << "\n";
    out << "level_bound_holds        " << (s.level_bound_holds ? "true" : "false") << "\n";
    out << "boundary_slope           " << format_double(s.boundary_slope) << "\n";
    write_text_file(path_in(cfg, "profile_forced_alpha_" + format_double(f.amplitude()) + ".csv"),
                    profile_csv(s.record.u));
    return s.record.converged ? kOk : kNotConverged;
  }

  const double lambda = opt.lambda.value_or(cfg.sweep.lambda);
  const GridPtr grid = make_problem_grid(cfg);
  const Problem problem = make_lambda_problem(cfg, grid);
  try {
    check_admissible_lambda(problem, lambda);
  } catch (const LambdaOutOfRange& e) {
    err << "error: lambda = " << format_double(lambda) << " is outside ]0, lambda*[ (lambda* = "
        << format_double(e.lambda_star()) << ")\n";
    return kConfigError;
  }
  const SolutionRecord rec = mountain_pass(problem, lambda, cfg.solver);
  out << record_summary(rec);
  write_text_file(path_in(cfg, profile_name(lambda)), profile_csv(rec.u));
  return rec.converged ? kOk : kNotConverged;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.problem.mode == Mode::Forced) {
    err << "error: sweep needs an autonomous or weighted problem\n";
    return kConfigError;
  }
  const std::vector<double> lambdas = sweep_grid(cfg);
  if (lambdas.empty()) {
    err << "error: empty lambda grid\n";
    return kConfigError;
  }
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > lambdas[i - 1])) {
      err << "error: lambda grid must be strictly increasing\n";
      return kConfigError;
    }
  }
  const GridPtr grid = make_problem_grid(cfg);
  const Problem problem = make_lambda_problem(cfg, grid);
  const Branch branch = sweep(problem, lambdas, cfg.solver, cfg.sweep.warm, cfg.threads);

  for (const auto& g : branch.gaps) err << "gap at lambda = " << format_double(g.lambda) << ": " << g.reason << "\n";
  write_text_file(path_in(cfg, "branch.csv"), branch_csv(branch));
  for (const auto& r : branch.records) write_text_file(path_in(cfg, profile_name(r.lambda)), profile_csv(r.u));
  if (branch.records.empty()) {
    err << "error: no lambda converged\n";
    return kNotConverged;
  }

  const BranchDiagnostics diag = diagnose(branch);
  const double lambda0 = cfg.sweep.lambda0;
  const bool on_branch = find_record(branch, lambda0).has_value();
  std::optional<ScalingReport> scaling;
  if (on_branch && problem.mode() == Mode::Autonomous && problem.nonlinearity().pure_power_exponent())
    scaling = scaling_check(problem, branch, lambda0);
  std::optional<TransferReport> transfer;
  if (lambda0 >= branch.records.front().lambda && lambda0 <= branch.records.back().lambda)
    transfer = ps_transfer_check(problem, branch, lambda0);
  std::optional<LimitReport> limit;
  if (on_branch) limit = branch_limit_check(branch, lambda0, cfg.sweep.neighbors);
  write_text_file(path_in(cfg, "diagnostics.json"), sweep_diagnostics_json(branch, diag, scaling, transfer, limit));

  out << "records          " << branch.records.size() << " of " << lambdas.size() << "\n";
  out << "gaps             " << branch.gaps.size() << "\n";
  out << "levels           [" << format_double(diag.level_min) << ", " << format_double(diag.level_max) << "]\n";
  out << "monotone         " << (diag.monotone ? "true" : "false") << "\n";
  out << "max_level_jump   " << format_double(diag.max_level_jump) << "\n";
  out << "max_field_jump   " << format_double(diag.max_field_jump) << "\n";
  if (scaling) out << "scaling_max_dev  " << format_double(scaling->max_rel_deviation) << "\n";
  if (transfer) out << "transfer_ok      " << (transfer->all_ok ? "true" : "false") << "\n";
  if (limit) out << "limit_max_dist   " << format_double(limit->max_distance) << "\n";
  return kOk;
}

int cmd_threshold(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const GridPtr ball = make_forced_grid(cfg);
  const double p = cfg.forced.exponent;
  const GeometryConstants g = forced_geometry(cfg, ball);
  const ForcingTerm profile(reference_profile(ball, cfg.forced.profile), cfg.forced.q, 0.0);
  ThresholdResult t;
  try {
    t = positivity_threshold(ball, p, profile, cfg.solver, cfg.forced.alpha_max_factor * g.beta,
                             cfg.forced.resolution_factor * g.beta);
  } catch (const NoPositiveSolutionAtZero& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  }
  std::vector<double> amps;
  for (double f : cfg.forced.limit_factors) amps.push_back(f * g.beta);
  const LimitStudy limit = limit_study(ball, p, profile, amps, cfg.solver, cfg.threads);

  write_text_file(path_in(cfg, "threshold.csv"), threshold_csv(t));
  write_text_file(path_in(cfg, "limit.csv"), limit_csv(limit));
  write_text_file(path_in(cfg, "threshold.json"), threshold_report_json(g, t, limit));

  out << "C_sobolev        " << format_double(g.c_sobolev) << "\n";
  out << "a, b, beta       " << format_double(g.a) << ", " << format_double(g.b) << ", " << format_double(g.beta)
      << "\n";
  out << "alpha_hat        " << format_double(t.alpha_hat) << "\n";
  if (t.degenerate)
    out << "degenerate run: every probe up to alpha_max = " << format_double(t.alpha_max)
        << " gave a positive solution; no finite threshold found\n";
  else
    out << "first failure    " << format_double(t.alpha_fail) << "\n";
  for (double a : t.non_monotone) err << "non-monotone: positive solution at alpha = " << format_double(a) << "\n";
  out << "limit distances  ";
  for (const auto& r : limit.rows) out << format_double(r.sup_dist) << ' ';
  out << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  AcceptanceOptions opts;
  opts.threads = cfg.threads;
  opts.out_dir = cfg.output_dir;
  opts.on_result = [&out](const CriterionResult& r) { out << format_result(r) << std::endl; };
  const auto results = run_acceptance(cfg, opts);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  if (failed == 0) {
    out << "all " << results.size() << " criteria passed\n";
    return kOk;
  }
  out << failed << " of " << results.size() << " criteria failed:";
  for (const auto& r : results)
    if (!r.passed) out << ' ' << r.id;
  out << "\n";
  return kAcceptanceFailure;
}

int cmd_lambda_star(const RunConfig& cfg, std::ostream& out) {
  const Nonlinearity nl = make_nonlinearity(cfg.problem);
  const LambdaStar ls = lambda_star(nl);
  out << "nonlinearity  " << nl.describe() << "\n";
  out << "lambda*       " << format_double(ls.value) << "\n";
  out << "attained      " << (ls.attained ? "true" : "false") << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mountain-pass solver, ground-state continuation and forced-problem diagnostics", "varcont"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Run configuration (.ini, or .json)");
    sub->add_option("--out", opt.out_dir, "Output directory (overrides run.output_dir)");
    sub->add_option("--seed", opt.seed, "Seed for random probes (overrides run.seed)");
    sub->add_option("--threads", opt.threads, "Worker threads for independent solves")->check(CLI::PositiveNumber);
  };
  CLI::App* solve = app.add_subcommand("solve", "Single solve; writes the profile CSV");
  add_common(solve);
  solve->add_option("--lambda", opt.lambda, "Value of lambda (autonomous/weighted problems)");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Lambda sweep with branch diagnostics");
  add_common(sweep_cmd);
  CLI::App* threshold = app.add_subcommand("threshold", "Positivity threshold and limit study of the forced problem");
  add_common(threshold);
  CLI::App* verify = app.add_subcommand("verify", "Run the acceptance suite");
  add_common(verify);
  verify->add_flag("--list", opt.list, "List the criteria without running them");
  CLI::App* lstar = app.add_subcommand("lambda-star", "Print lambda* of the configured nonlinearity");
  add_common(lstar);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (verify->parsed() && opt.list) {
    for (const auto& c : acceptance_criteria()) out << c.id << "  " << c.title << "\n";
    return kOk;
  }
  if (opt.config_path.empty()) {
    err << "error: --config is required\n";
    return kConfigError;
  }

  RunConfig cfg;
  try {
    cfg = load_config(opt.config_path);
    if (opt.out_dir) cfg.output_dir = *opt.out_dir;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.threads) cfg.threads = *opt.threads;
    validate_config(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg, opt, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out, err);
    if (threshold->parsed()) return cmd_threshold(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
    return cmd_lambda_star(cfg, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const HypothesisViolation& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  }
}

}  // namespace varcont::cli
