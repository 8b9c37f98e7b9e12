#include "varcont/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "varcont/errors.hpp"

namespace varcont {

namespace {

double log_log_slope(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (auto [x, y] : xy) {
    if (!(x > 0.0) || !(y > 0.0)) continue;
    const double lx = std::log(x), ly = std::log(y);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = m * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / den;
}

struct Attempt {
  std::optional<SolutionRecord> record;
  std::string reason;
};

Attempt attempt(const Problem& problem, double lambda, const MountainPassConfig& cfg,
                const std::optional<RadialField>& warm) {
  Attempt out;
  try {
    check_admissible_lambda(problem, lambda);
    SolutionRecord rec = mountain_pass(problem, lambda, cfg, warm);
    if (rec.converged)
      out.record = std::move(rec);
    else
      out.reason = "not converged (residual " + std::to_string(rec.grad_residual) + ")";
  } catch (const Error& e) {
    out.reason = e.what();
  }
  return out;
}

}  // namespace

std::vector<double> lambda_range(double lo, double hi, double step) {
  if (!(step > 0.0)) throw InvalidArgument("lambda_range: step must be positive");
  std::vector<double> out;
  if (hi < lo) return out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

Branch sweep(const Problem& problem, const std::vector<double>& lambda_grid, const MountainPassConfig& cfg,
             bool warm, int threads) {
  cfg.validate();
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1])) throw InvalidArgument("sweep: λ grid must be strictly increasing");

  Branch branch;
  branch.lambda_grid = lambda_grid;
  branch.warm_started = warm;

  std::vector<Attempt> attempts(lambda_grid.size());
  if (warm) {
    std::optional<RadialField> previous;
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
      attempts[i] = attempt(problem, lambda_grid[i], cfg, previous);
      if (attempts[i].record) previous = attempts[i].record->u;
    }
  } else {
    detail::parallel_for(lambda_grid.size(), threads,
                         [&](std::size_t i) { attempts[i] = attempt(problem, lambda_grid[i], cfg, std::nullopt); });
  }

  for (std::size_t i = 0; i < attempts.size(); ++i) {
    if (attempts[i].record)
      branch.records.push_back(std::move(*attempts[i].record));
    else
      branch.gaps.push_back({lambda_grid[i], attempts[i].reason});
  }
  return branch;
}

std::optional<std::size_t> find_record(const Branch& branch, double lambda) {
  for (std::size_t i = 0; i < branch.records.size(); ++i)
    if (std::abs(branch.records[i].lambda - lambda) <= 1e-12 * std::max(1.0, std::abs(lambda))) return i;
  return std::nullopt;
}

BranchDiagnostics diagnose(const Branch& branch) {
  if (branch.records.empty()) throw InvalidArgument("diagnose: empty branch");
  BranchDiagnostics d;
  const auto& recs = branch.records;
  d.size = recs.size();
  d.level_min = d.level_max = recs.front().level;
  for (const auto& r : recs) {
    d.level_min = std::min(d.level_min, r.level);
    d.level_max = std::max(d.level_max, r.level);
    d.max_h1_sq = std::max(d.max_h1_sq, r.grad_sq + r.lambda * r.l2_sq);
  }
  const double slack = 1e-9 * std::max(1.0, std::max(std::abs(d.level_min), std::abs(d.level_max)));
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double jump = recs[i].level - recs[i - 1].level;
    if (jump < -slack) d.monotone = false;
    d.max_level_jump = std::max(d.max_level_jump, std::abs(jump));
    d.max_field_jump = std::max(d.max_field_jump, h1_norm(recs[i].u - recs[i - 1].u, 1.0));
  }
  return d;
}

double scaling_exponent(double p, int dimension) { return 2.0 / (p - 1.0) + 1.0 - 0.5 * dimension; }

ScalingReport scaling_check(const Problem& problem, const Branch& branch, double lambda_ref) {
  if (problem.mode() != Mode::Autonomous) throw InvalidArgument("scaling_check: autonomous problems only");
  const auto p = problem.nonlinearity().pure_power_exponent();
  if (!p) throw InvalidArgument("scaling_check: nonlinearity is not a pure power");
  const auto ref = find_record(branch, lambda_ref);
  if (!ref) throw InvalidArgument("scaling_check: reference λ is not on the branch");

  ScalingReport rep;
  rep.theta = scaling_exponent(*p, problem.grid()->dimension());
  rep.lambda_ref = lambda_ref;
  const double m_ref = branch.records[*ref].level;
  for (const auto& r : branch.records) {
    ScalingEntry e;
    e.lambda = r.lambda;
    e.ratio = r.level / m_ref;
    e.expected = std::pow(r.lambda / lambda_ref, rep.theta);
    e.rel_deviation = std::abs(e.ratio - e.expected) / e.expected;
    rep.max_rel_deviation = std::max(rep.max_rel_deviation, e.rel_deviation);
    rep.entries.push_back(e);
  }
  return rep;
}

TransferReport ps_transfer_check(const Problem& problem, const Branch& branch, double lambda0, double slack_rel) {
  TransferReport rep;
  rep.lambda0 = lambda0;
  std::vector<std::pair<double, double>> decay;
  for (const auto& r : branch.records) {
    TransferEntry e;
    e.lambda = r.lambda;
    const double dl = std::abs(r.lambda - lambda0);
    const double u2 = std::sqrt(r.l2_sq);
    e.residual = lp_norm(gradient(problem, r.u, lambda0), 2.0);
    e.residual_bound = r.grad_residual_l2 + dl * u2 + slack_rel * std::max(1.0, u2);
    e.level_gap = std::abs(energy(problem, r.u, lambda0) - r.level);
    e.level_bound = 2.0 * dl * std::abs(ab_split(problem, r.u).b_part) + slack_rel * std::max(1.0, std::abs(r.level));
    e.ok = e.residual <= e.residual_bound && e.level_gap <= e.level_bound;
    rep.all_ok = rep.all_ok && e.ok;
    if (dl > 0.0) {
      rep.residual_lipschitz = std::max(rep.residual_lipschitz, e.residual / dl);
      rep.level_lipschitz = std::max(rep.level_lipschitz, e.level_gap / dl);
      decay.emplace_back(dl, e.residual);
    }
    rep.entries.push_back(e);
  }
  rep.residual_decay_order = log_log_slope(decay);
  return rep;
}

LimitReport branch_limit_check(const Branch& branch, double lambda0, int neighbors) {
  const auto centre = find_record(branch, lambda0);
  if (!centre) throw InvalidArgument("branch_limit_check: λ0 is not on the branch");
  LimitReport rep;
  rep.lambda0 = lambda0;
  const auto& u0 = branch.records[*centre].u;
  const long c = static_cast<long>(*centre);
  const long lo = std::max(0L, c - neighbors);
  const long hi = std::min(static_cast<long>(branch.records.size()) - 1, c + neighbors);
  std::vector<std::pair<double, double>> decay;
  for (long i = lo; i <= hi; ++i) {
    const auto& r = branch.records[static_cast<std::size_t>(i)];
    LimitEntry e{r.lambda, h1_norm(r.u - u0, 1.0)};
    rep.max_distance = std::max(rep.max_distance, e.distance);
    if (i != c) decay.emplace_back(std::abs(r.lambda - lambda0), e.distance);
    rep.entries.push_back(e);
  }
  rep.decay_order = log_log_slope(decay);
  return rep;
}

BranchComparison compare_branches(const Branch& a, const Branch& b) {
  BranchComparison cmp;
  for (const auto& r : a.records) {
    if (auto j = find_record(b, r.lambda)) {
      cmp.max_distance = std::max(cmp.max_distance, h1_norm(r.u - b.records[*j].u, 1.0));
      ++cmp.matched;
    }
  }
  return cmp;
}

}  // namespace varcont
