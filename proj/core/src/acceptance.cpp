#include "varcont/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "varcont/continuation.hpp"
#include "varcont/nonhomogeneous.hpp"
#include "varcont/probes.hpp"
#include "varcont/report.hpp"

namespace varcont {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accumulates per-check outcomes of one criterion.
struct Checks {
  bool ok = true;
  std::string detail;

  void add(bool pass, const std::string& what) {
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += (pass ? "" : "FAILED ") + what;
  }
};

std::vector<double> refine(const std::vector<double>& grid) {
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) out.push_back(0.5 * (grid[i - 1] + grid[i]));
    out.push_back(grid[i]);
  }
  return out;
}

class Suite {
 public:
  Suite(const RunConfig& cfg, const AcceptanceOptions& opt) : cfg_(cfg), opt_(opt) {}

  CriterionResult run(int id) {
    CriterionResult res;
    res.id = id;
    res.title = acceptance_criteria().at(static_cast<std::size_t>(id - 1)).title;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Checks c;
      switch (id) {
        case 1: oracle_equivalence(c); break;
        case 2: identities(c); break;
        case 3: scaling(c); break;
        case 4: monotonicity(c); break;
        case 5: transfer(c); break;
        case 6: lambda_star_checks(c); break;
        case 7: hypotheses(c); break;
        case 8: forced_bounds(c); break;
        case 9: threshold(c); break;
        case 10: limit(c); break;
        case 11: gradient_consistency(c); break;
        case 12: determinism(c); break;
        default: throw Failure("unknown criterion");
      }
      res.passed = c.ok;
      res.detail = c.detail;
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = std::string("error: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

 private:
  // ---- shared state, built on first use ----

  const GridPtr& grid() {
    if (!grid_) grid_ = make_problem_grid(cfg_);
    return grid_;
  }

  const Problem& problem() {
    if (!problem_) problem_ = make_lambda_problem(cfg_, grid());
    return *problem_;
  }

  // The reference criteria are stated for the autonomous pure-power problem.
  double reference_exponent() {
    if (problem().mode() != Mode::Autonomous) throw Failure("reference problem must be autonomous");
    const auto p = problem().nonlinearity().pure_power_exponent();
    if (!p) throw Failure("reference nonlinearity must be a pure power");
    return *p;
  }

  const SolutionRecord& record(double lambda) {
    auto it = records_.find(lambda);
    if (it == records_.end()) it = records_.emplace(lambda, mountain_pass(problem(), lambda, cfg_.solver)).first;
    return it->second;
  }

  const Branch& coarse() {
    if (!coarse_) coarse_ = sweep(problem(), sweep_grid(cfg_), cfg_.solver, true);
    return *coarse_;
  }

  const GridPtr& ball() {
    if (!ball_) ball_ = make_forced_grid(cfg_);
    return ball_;
  }

  const std::vector<RadialField>& probes() {
    if (!probes_) probes_ = sobolev_probes(ball(), cfg_.forced.exponent, cfg_.seed, cfg_.forced.random_probes);
    return *probes_;
  }

  const GeometryConstants& geometry() {
    if (!geometry_)
      geometry_ = geometry_from_constant(
          measure_sobolev_constant(probes(), cfg_.forced.exponent, cfg_.forced.q), cfg_.forced.exponent);
    return *geometry_;
  }

  ForcingTerm profile(const std::string& name) {
    return ForcingTerm(reference_profile(ball(), name), cfg_.forced.q, 0.0);
  }

  ThresholdResult compute_threshold() {
    const double beta = geometry().beta;
    return positivity_threshold(ball(), cfg_.forced.exponent, profile(cfg_.forced.profile), cfg_.solver,
                                cfg_.forced.alpha_max_factor * beta, cfg_.forced.resolution_factor * beta);
  }

  LimitStudy compute_limit(int threads) {
    std::vector<double> amps;
    for (double f : cfg_.forced.limit_factors) amps.push_back(f * geometry().beta);
    return limit_study(ball(), cfg_.forced.exponent, profile(cfg_.forced.profile), amps, cfg_.solver, threads);
  }

  const ThresholdResult& threshold_result() {
    if (!threshold_) threshold_ = compute_threshold();
    return *threshold_;
  }

  const LimitStudy& limit_result() {
    if (!limit_) limit_ = compute_limit(opt_.threads);
    return *limit_;
  }

  // ---- criteria ----

  void oracle_equivalence(Checks& c) {
    reference_exponent();
    for (double lambda : {0.5, 1.0, 2.0}) {
      const SolutionRecord& rec = record(lambda);
      const RadialField oracle =
          shooting_ground_state(grid()->dimension(), lambda, problem().nonlinearity(), grid());
      const double sup = (rec.u - oracle).sup_norm() / rec.u.sup_norm();
      const double lev = std::abs(energy(problem(), oracle, lambda) - rec.level) / rec.level;
      c.add(rec.converged && rec.positive && sup <= 1e-3 && lev <= 1e-3,
            "λ=" + sci(lambda) + " sup " + sci(sup) + " level " + sci(lev) +
                (rec.converged ? "" : " not converged") + (rec.positive ? "" : " not positive"));
    }
  }

  void identities(Checks& c) {
    reference_exponent();
    for (double lambda : {0.5, 1.0, 2.0}) {
      const SolutionRecord& r = record(lambda);
      c.add(r.converged && r.pohozaev_residual <= 1e-3 && r.energy_identity_residual <= 1e-3 &&
                r.nehari_residual <= 1e-3,
            "λ=" + sci(lambda) + " pohozaev " + sci(r.pohozaev_residual) + " energy-id " +
                sci(r.energy_identity_residual) + " nehari " + sci(r.nehari_residual));
    }
    std::vector<SolutionRecord> ladder;
    for (int n : cfg_.verify.ladder) {
      const GridPtr g = make_grid(cfg_.problem.dimension, cfg_.problem.radius, n, cfg_.problem.domain);
      const Problem p = Problem::autonomous(g, problem().nonlinearity(), problem().force_positive());
      ladder.push_back(mountain_pass(p, 1.0, cfg_.solver));
    }
    bool decreasing = true;
    std::string trail;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const auto& r = ladder[i];
      decreasing = decreasing && r.converged;
      if (i > 0) {
        const auto& q = ladder[i - 1];
        decreasing = decreasing && r.pohozaev_residual < q.pohozaev_residual &&
                     r.energy_identity_residual < q.energy_identity_residual &&
                     (r.nehari_residual < q.nehari_residual || r.nehari_residual < 1e-10);
      }
      trail += (i ? " > " : "") + sci(r.pohozaev_residual);
    }
    c.add(decreasing, "ladder n=" + std::to_string(cfg_.verify.ladder.front()) + ".." +
                          std::to_string(cfg_.verify.ladder.back()) + " pohozaev " + trail);
  }

  void scaling(Checks& c) {
    const double p = reference_exponent();
    const std::vector<double> lambdas{0.5, 0.75, 1.0, 1.5, 2.0};
    const Branch b = sweep(problem(), lambdas, cfg_.solver, false, opt_.threads);
    c.add(b.gaps.empty(), std::to_string(b.records.size()) + "/5 converged");
    const ScalingReport rep = scaling_check(problem(), b, 1.0);
    const double theta_fit = std::log(b.records.back().level / b.records.front().level) / std::log(4.0);
    c.add(rep.max_rel_deviation <= 0.01, "θ=" + sci(scaling_exponent(p, grid()->dimension())) + " max deviation " +
                                             sci(rep.max_rel_deviation) + " fitted θ " + sci(theta_fit));
  }

  void monotonicity(Checks& c) {
    const Branch& b1 = coarse();
    const Branch b2 = sweep(problem(), refine(sweep_grid(cfg_)), cfg_.solver, true);
    const Branch cold = sweep(problem(), sweep_grid(cfg_), cfg_.solver, false, opt_.threads);
    c.add(b1.gaps.empty() && b2.gaps.empty(), std::to_string(b1.records.size()) + " + " +
                                                  std::to_string(b2.records.size()) + " records, " +
                                                  std::to_string(b1.gaps.size() + b2.gaps.size()) + " gaps");
    const BranchDiagnostics d1 = diagnose(b1), d2 = diagnose(b2);
    c.add(d1.monotone && d2.monotone, "levels nondecreasing");
    const double level_ratio = d2.max_level_jump / d1.max_level_jump;
    const double field_ratio = d2.max_field_jump / d1.max_field_jump;
    c.add(level_ratio <= 0.5, "level jump ratio " + sci(level_ratio) + " (need ≤ 0.5)");
    c.add(field_ratio <= 0.5, "field jump ratio " + sci(field_ratio) + " (need ≤ 0.5)");
    const BranchComparison cmp = compare_branches(b1, cold);
    c.add(cmp.matched == b1.records.size() && cmp.max_distance <= 1e-3,
          "warm/cold H¹ gap " + sci(cmp.max_distance));
  }

  void transfer(Checks& c) {
    const Branch& b = coarse();
    const double lambda0 = cfg_.sweep.lambda0;
    if (!find_record(b, lambda0)) throw Failure("λ0 is not on the sweep");
    const TransferReport rep = ps_transfer_check(problem(), b, lambda0, 1e-6);
    c.add(rep.all_ok && std::isfinite(rep.residual_lipschitz),
          "residual bound on " + std::to_string(rep.entries.size()) + " records, Lipschitz " +
              sci(rep.residual_lipschitz));
    double worst_level = 0.0, worst_grad = 0.0;
    for (const auto& r : b.records) {
      const double direct = energy(problem(), r.u, lambda0);
      worst_level = std::max(worst_level, std::abs(transfer_level(problem(), r.u, r.lambda, lambda0) - direct) /
                                              std::max(1.0, std::abs(direct)));
      const double scale = std::max(1.0, apply_operator(r.u, lambda0).sup_norm());
      worst_grad = std::max(worst_grad, (transfer_gradient(problem(), r.u, r.lambda, lambda0) -
                                         gradient(problem(), r.u, lambda0)).sup_norm() / scale);
    }
    c.add(worst_level <= 1e-12 && worst_grad <= 1e-12,
          "transfer vs direct level " + sci(worst_level) + " gradient " + sci(worst_grad));
  }

  void lambda_star_checks(Checks& c) {
    const LambdaStar sat = lambda_star(Nonlinearity::saturating_cubic());
    c.add(std::abs(sat.value - 1.0) <= 1e-6, "λ*(saturating) = " + format_double(sat.value));
    const Problem p = Problem::autonomous(grid(), Nonlinearity::saturating_cubic());
    bool refused = false;
    try {
      (void)mountain_pass(p, 1.2, cfg_.solver);
    } catch (const LambdaOutOfRange&) {
      refused = true;
    }
    c.add(refused, "λ = 1.2 refused");
    c.add(lambda_star(Nonlinearity::pure_power(3.0)).infinite(), "λ*(cubic) = inf");
  }

  void hypotheses(Checks& c) {
    const HypothesisReport cubic = check_hypotheses(Nonlinearity::pure_power(3.0), 3);
    c.add(cubic.h1 && cubic.h2 && cubic.h3 && cubic.h4 == AmbrosettiRabinowitz::Holds && cubic.mu == 4.0 &&
              cubic.subcritical,
          "cubic satisfies every growth hypothesis, μ = " + format_double(cubic.mu));
    const HypothesisReport sat = check_hypotheses(Nonlinearity::saturating_cubic(), 3);
    c.add(sat.h4 == AmbrosettiRabinowitz::Fails, "saturating fails the Ambrosetti-Rabinowitz condition");
    const HypothesisReport quintic = check_hypotheses(Nonlinearity::pure_power(5.0), 3);
    c.add(!quintic.subcritical, "p = 5, N = 3 supercritical");
  }

  void forced_bounds(Checks& c) {
    const GeometryConstants& g = geometry();
    const double p = cfg_.forced.exponent;
    const double lhs1 = 0.5 * g.a * g.a - g.c_used * std::pow(g.a, p + 1.0);
    c.add(lhs1 >= 0.25 * g.a * g.a * (1.0 - 1e-12) && g.c_used * g.beta * g.a <= g.a * g.a / 8.0 * (1.0 + 1e-12),
          "C=" + sci(g.c_sobolev) + " a=" + sci(g.a) + " b=" + sci(g.b) + " β=" + sci(g.beta));
    int runs = 0;
    double min_margin = INFINITY;
    for (const std::string& name : {cfg_.forced.profile, std::string("positive")}) {
      for (double frac : {0.0, 0.25, 0.5, 1.0}) {
        const ForcingTerm f = profile(name).with_amplitude(frac * g.beta);
        const ForcedSolution s = solve_forced(ball(), p, f, cfg_.solver, g);
        const PsBound ps = ps_bound_check(s.record, p, f.field(), probes());
        const bool ok = s.record.converged && s.record.level >= g.b && s.level_bound_holds && ps.holds;
        min_margin = std::min(min_margin, s.ray_max - s.record.level);
        ++runs;
        if (!ok)
          c.add(false, name + " α=" + sci(f.amplitude()) + " level " + sci(s.record.level) + " ray max " +
                           sci(s.ray_max) + " ps " + sci(ps.lhs) + "/" + sci(ps.rhs));
      }
    }
    c.add(true, std::to_string(runs) + " runs with c_f ≥ b, c_f ≤ ray max (min margin " + sci(min_margin) +
                    "), PS bound");
  }

  void threshold(Checks& c) {
    const RadialField raw = reference_profile(ball(), cfg_.forced.profile);
    c.add(raw.min_interior() < 0.0, "profile '" + cfg_.forced.profile + "' changes sign");
    const ThresholdResult& t = threshold_result();
    const double beta = geometry().beta;
    c.add(t.alpha_hat >= 1e-3 * beta, "α̂ = " + sci(t.alpha_hat) + " = " + sci(t.alpha_hat / beta) + "β" +
                                          (t.degenerate ? " (degenerate: positive up to α_max)" : "") + ", " +
                                          std::to_string(t.probes.size()) + " probes");
    bool strict = true;
    for (const auto& pr : t.probes)
      if (pr.positive) strict = strict && pr.min_u > 0.0;
    c.add(strict, "positive probes have min u > 0");
    if (!t.non_monotone.empty()) c.add(true, std::to_string(t.non_monotone.size()) + " non-monotone observations");
  }

  void limit(Checks& c) {
    const LimitStudy& s = limit_result();
    const double u0 = s.base.u.sup_norm();
    bool converged = s.base.converged;
    for (const auto& r : s.rows) converged = converged && r.converged;
    c.add(converged, "all solves converged");
    c.add(s.distances_decreasing, "sup distances decreasing");
    const double last = s.rows.back().sup_dist;
    c.add(last <= 1e-2 * u0, "final distance " + sci(last / u0) + "·‖u₀‖∞");
    double worst = 1.0;
    for (std::size_t i = 1; i < s.rows.size(); ++i) {
      const double q = (std::abs(s.rows[i - 1].pairing) / std::abs(s.rows[i].pairing)) /
                       (s.rows[i - 1].alpha / s.rows[i].alpha);
      if (std::abs(std::log(q)) > std::abs(std::log(worst))) worst = q;
    }
    c.add(worst >= 0.5 && worst <= 2.0, "∫f·u proportional to α within factor " + sci(worst));
  }

  void gradient_consistency(Checks& c) {
    struct Case {
      std::string name;
      Problem problem;
      double lambda;
    };
    const Nonlinearity& nl = problem().nonlinearity();
    const std::string pot = cfg_.problem.potential == "one" ? "one_plus_exp" : cfg_.problem.potential;
    const RadialField forcing = geometry().beta * profile(cfg_.forced.profile).profile();
    const std::vector<Case> cases{
        {"autonomous", Problem::autonomous(grid(), nl, cfg_.problem.force_positive), 1.0},
        {"weighted", Problem::weighted(grid(), nl, make_potential(pot), cfg_.problem.force_positive), 1.0},
        {"forced", Problem::forced(ball(), cfg_.forced.exponent, forcing), 1.0},
    };
    std::uint64_t salt = 0;
    for (const auto& k : cases) {
      SplitMix64 rng(cfg_.seed ^ (0xA5A5A5A5ULL + ++salt));
      const auto& g = *k.problem.grid();
      const double hr = g.spacing() / g.radius();
      double worst_ratio = 4.0, worst_gap = 0.0;
      bool ok = true;
      for (int pair = 0; pair < cfg_.verify.gradient_pairs; ++pair) {
        const RadialField u = random_positive_field(k.problem.grid(), rng);
        const RadialField v = random_smooth_field(k.problem.grid(), rng);
        auto fd = [&](double e) {
          return (energy(k.problem, u + e * v, k.lambda) - energy(k.problem, u - e * v, k.lambda)) / (2.0 * e);
        };
        const double e0 = 0.04;
        const double d1 = fd(e0), d2 = fd(e0 / 2), d3 = fd(e0 / 4);
        const double ratio = (d1 - d2) / (d2 - d3);
        const double extrapolated = (4.0 * d3 - d2) / 3.0;
        const double pairing = inner(gradient(k.problem, u, k.lambda), v);
        const double scale = std::sqrt(dirichlet_form(u, u) * dirichlet_form(v, v));
        const double gap = std::abs(extrapolated - pairing) / scale;
        ok = ok && ratio >= 3.9 && ratio <= 4.1 && gap <= 4.0 * hr * hr + 1e-10;
        if (std::abs(ratio - 4.0) > std::abs(worst_ratio - 4.0)) worst_ratio = ratio;
        worst_gap = std::max(worst_gap, gap);
      }
      c.add(ok, k.name + " ratio " + sci(worst_ratio) + " gap " + sci(worst_gap) + " vs 4(h/R)² " +
                    sci(4.0 * hr * hr));
    }
  }

  void determinism(Checks& c) {
    struct Output {
      std::string name;
      std::string first;
      std::string second;
    };
    std::vector<Output> outs;
    {
      // warm sweep rerun, and a cold sweep with a different worker count
      const Branch again = sweep(problem(), sweep_grid(cfg_), cfg_.solver, true);
      outs.push_back({"branch.csv", branch_csv(coarse()), branch_csv(again)});
      const auto grid_l = sweep_grid(cfg_);
      const Branch cold1 = sweep(problem(), grid_l, cfg_.solver, false, 1);
      const Branch cold2 = sweep(problem(), grid_l, cfg_.solver, false, std::max(2, opt_.threads));
      outs.push_back({"branch_cold.csv", branch_csv(cold1), branch_csv(cold2)});
    }
    {
      const ThresholdResult first = threshold_result();
      geometry_.reset();
      probes_.reset();
      const ThresholdResult second = compute_threshold();
      outs.push_back({"threshold.csv", threshold_csv(first), threshold_csv(second)});
    }
    {
      const LimitStudy first = limit_result();
      const LimitStudy second = compute_limit(opt_.threads > 1 ? 1 : 3);
      outs.push_back({"limit.csv", limit_csv(first), limit_csv(second)});
    }
    outs.push_back({"profile.csv", profile_csv(record(cfg_.sweep.lambda0).u),
                    profile_csv(mountain_pass(problem(), cfg_.sweep.lambda0, cfg_.solver).u)});
    for (const auto& o : outs) {
      c.add(o.first == o.second, o.name + " " + std::to_string(o.first.size()) + " bytes");
      if (!opt_.out_dir.empty()) write_text_file(opt_.out_dir + "/" + o.name, o.first);
    }
  }

  const RunConfig& cfg_;
  const AcceptanceOptions& opt_;
  GridPtr grid_;
  std::optional<Problem> problem_;
  std::map<double, SolutionRecord> records_;
  std::optional<Branch> coarse_;
  GridPtr ball_;
  std::optional<std::vector<RadialField>> probes_;
  std::optional<GeometryConstants> geometry_;
  std::optional<ThresholdResult> threshold_;
  std::optional<LimitStudy> limit_;
};

}  // namespace

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> list{
      {1, "oracle equivalence: mountain pass vs shooting at λ ∈ {0.5, 1, 2}"},
      {2, "critical-point identities and refinement ladder"},
      {3, "scaling law m_λ/m_1 = λ^θ"},
      {4, "monotonicity and continuity of m_λ under step halving"},
      {5, "transfer diagnostics at λ0"},
      {6, "λ* values and admissibility"},
      {7, "hypothesis checker"},
      {8, "forced problem: barrier, level bound, PS bound"},
      {9, "positivity threshold"},
      {10, "limit study α → 0"},
      {11, "gradient consistency against finite differences"},
      {12, "determinism of CSV outputs"},
  };
  return list;
}

std::vector<CriterionResult> run_acceptance(const RunConfig& config, const AcceptanceOptions& options) {
  Suite suite(config, options);
  std::vector<CriterionResult> out;
  for (const auto& info : acceptance_criteria()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), info.id) == options.only.end())
      continue;
    out.push_back(suite.run(info.id));
    if (options.on_result) options.on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d  ", r.passed ? "PASS" : "FAIL", r.id);
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.1f s)", r.seconds);
  return head + r.title + tail + "\n        " + r.detail;
}

}  // namespace varcont
