#include "varcont/nonhomogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "varcont/errors.hpp"
#include "varcont/probes.hpp"

namespace varcont {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_forced_data(const GridPtr& grid, double p) {
  if (grid->kind() != DomainKind::Ball) throw InvalidArgument("forced problem needs a ball grid");
  if (!(p > 1.0) || !(p < critical_exponent(grid->dimension())))
    throw InvalidArgument("forced problem needs 1 < p < (N+2)/(N-2)");
}

double grad_norm(const RadialField& u) { return std::sqrt(dirichlet_form(u, u)); }

ThresholdProbe probe_at(const GridPtr& grid, double p, const ForcingTerm& profile, double alpha,
                        const MountainPassConfig& cfg) {
  ThresholdProbe pr;
  pr.alpha = alpha;
  try {
    const Problem prob = Problem::forced(grid, p, profile.with_amplitude(alpha).field());
    const SolutionRecord rec = mountain_pass(prob, 0.0, cfg);
    pr.converged = rec.converged;
    pr.level = rec.level;
    pr.min_u = rec.u.min_interior();
    pr.positive = rec.converged && rec.positive;
  } catch (const Error&) {
    pr.level = kNaN;
    pr.min_u = kNaN;
  }
  return pr;
}

}  // namespace

ForcingTerm::ForcingTerm(RadialField profile, double q, double amplitude) : q_(q), amplitude_(amplitude) {
  if (profile.empty()) throw InvalidArgument("ForcingTerm: empty profile");
  if (!(q > 0.5 * profile.grid().dimension())) throw InvalidArgument("ForcingTerm: q must exceed N/2");
  if (!(amplitude >= 0.0)) throw InvalidArgument("ForcingTerm: amplitude must be nonnegative");
  const double nq = lp_norm(profile, q);
  if (!(nq > 0.0)) throw InvalidArgument("ForcingTerm: profile vanishes on the grid");
  profile *= 1.0 / nq;
  profile_ = std::move(profile);
}

ForcingTerm ForcingTerm::with_amplitude(double amplitude) const {
  ForcingTerm out = *this;
  if (!(amplitude >= 0.0)) throw InvalidArgument("ForcingTerm: amplitude must be nonnegative");
  out.amplitude_ = amplitude;
  return out;
}

std::vector<RadialField> sobolev_probes(const GridPtr& grid, double p, std::uint64_t seed, int random_fields) {
  std::vector<RadialField> probes;
  probes.push_back(shooting_ball_ground_state(p, grid));
  const double R = grid->radius();
  for (int j = 0; j < 8; ++j) probes.push_back(tent_field(grid, j * R / 8.0, R / 8.0));
  SplitMix64 rng(seed);
  for (int j = 0; j < random_fields; ++j) probes.push_back(random_smooth_field(grid, rng));
  return probes;
}

double measure_sobolev_constant(const std::vector<RadialField>& probes, double p, double q) {
  if (probes.empty()) throw InvalidArgument("measure_sobolev_constant: no probes");
  const double q_dual = q / (q - 1.0);
  double c = 0.0;
  for (const auto& u : probes) {
    const double gn = grad_norm(u);
    if (!(gn > 0.0)) continue;
    const double power = std::pow(lp_norm(u, p + 1.0) / gn, p + 1.0);
    const double linear = lp_norm(u, q_dual) / gn;
    c = std::max({c, power, linear});
  }
  return c;
}

double measure_sobolev_constant(const GridPtr& grid, double p, double q, std::uint64_t seed) {
  require_forced_data(grid, p);
  if (!(q > 0.5 * grid->dimension())) throw InvalidArgument("q must exceed N/2");
  return measure_sobolev_constant(sobolev_probes(grid, p, seed), p, q);
}

GeometryConstants geometry_from_constant(double c_sobolev, double p) {
  if (!(c_sobolev > 0.0)) throw InvalidArgument("geometry: embedding constant must be positive");
  GeometryConstants g;
  g.c_sobolev = c_sobolev;
  g.c_used = 2.0 * c_sobolev;
  g.a = std::pow(1.0 / (4.0 * g.c_used), 1.0 / (p - 1.0));
  g.b = g.a * g.a / 8.0;
  g.beta = g.a / (8.0 * g.c_used);
  return g;
}

GeometryConstants geometry_constants(const GridPtr& grid, double p, double q, std::uint64_t seed) {
  return geometry_from_constant(measure_sobolev_constant(grid, p, q, seed), p);
}

double ray_maximum(const Problem& problem, const RadialField& v) {
  const double vs = v.sup_norm();
  if (!(vs > 0.0)) throw InvalidArgument("ray_maximum: zero direction");
  auto phi = [&](double t) { return energy(problem, t * v, 1.0); };

  // Geometric scan t = 2^{k/4}/‖v‖∞ until the energy is far below the best
  // sample (the superlinear term has taken over), then golden section around
  // the best sample. Small t can be negative and falling when ∫f·v > 0, so the
  // stop rule looks at magnitudes and not at the trend.
  std::vector<double> ts, es;
  double best_e = -std::numeric_limits<double>::infinity();
  for (int k = -80; k <= 400; ++k) {
    const double t = std::exp2(0.25 * k) / vs;
    const double e = phi(t);
    ts.push_back(t);
    es.push_back(e);
    best_e = std::max(best_e, e);
    if (e < -1e3 * std::max(1.0, std::abs(best_e))) break;
  }
  const auto best = static_cast<std::size_t>(std::max_element(es.begin(), es.end()) - es.begin());
  double a = best > 0 ? ts[best - 1] : 0.0;
  double b = best + 1 < ts.size() ? ts[best + 1] : ts[best];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 80 && b - a > 1e-14 * b; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - invphi * (b - a);
      fc = phi(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + invphi * (b - a);
      fd = phi(d);
    }
  }
  return std::max({es[best], fc, fd});
}

ForcedSolution solve_forced(const GridPtr& grid, double p, const ForcingTerm& f, const MountainPassConfig& cfg,
                            const std::optional<GeometryConstants>& geometry) {
  require_forced_data(grid, p);
  const Problem prob = Problem::forced(grid, p, f.field());
  ForcedSolution out;
  out.record = mountain_pass(prob, 0.0, cfg);
  out.record.lambda = f.amplitude();
  out.ray_max = ray_maximum(prob, shooting_ball_ground_state(p, grid));
  // The solver zeroes the nodal strong form, which differs from the discrete
  // energy derivative at O(h²); the level inherits that mismatch.
  const double hr = grid->spacing() / grid->radius();
  out.level_bound_holds = out.record.level <= out.ray_max + hr * hr * std::max(1.0, std::abs(out.ray_max));
  if (geometry) out.within_geometry = f.amplitude() <= geometry->beta;
  const std::size_t n = static_cast<std::size_t>(grid->interior_nodes());
  out.boundary_slope = (out.record.u[n] - out.record.u[n + 1]) / grid->spacing();
  return out;
}

ThresholdResult positivity_threshold(const GridPtr& grid, double p, const ForcingTerm& profile,
                                     const MountainPassConfig& cfg, double alpha_max, double resolution) {
  require_forced_data(grid, p);
  if (!(alpha_max > 0.0) || !(resolution > 0.0)) throw InvalidArgument("positivity_threshold: bad search range");

  ThresholdResult res;
  res.alpha_max = alpha_max;
  const ThresholdProbe zero = probe_at(grid, p, profile, 0.0, cfg);
  res.probes.push_back(zero);
  if (!zero.positive) throw NoPositiveSolutionAtZero("positivity_threshold: the unforced solve is not a positive solution");

  constexpr int kCoarse = 8;
  int first_fail = -1;
  for (int j = 1; j <= kCoarse; ++j) {
    const ThresholdProbe pr = probe_at(grid, p, profile, alpha_max * j / kCoarse, cfg);
    res.probes.push_back(pr);
    if (!pr.positive && first_fail < 0) first_fail = j;
    if (pr.positive && first_fail > 0) res.non_monotone.push_back(pr.alpha);
  }
  if (first_fail < 0) {
    res.degenerate = true;
    res.alpha_hat = alpha_max;
    res.alpha_fail = kNaN;
    return res;
  }

  double lo = alpha_max * (first_fail - 1) / kCoarse;
  double hi = alpha_max * first_fail / kCoarse;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    const ThresholdProbe pr = probe_at(grid, p, profile, mid, cfg);
    res.probes.push_back(pr);
    (pr.positive ? lo : hi) = mid;
  }
  res.alpha_hat = lo;
  res.alpha_fail = hi;
  return res;
}

LimitStudy limit_study(const GridPtr& grid, double p, const ForcingTerm& profile,
                       const std::vector<double>& amplitudes, const MountainPassConfig& cfg, int threads) {
  require_forced_data(grid, p);
  if (amplitudes.empty()) throw InvalidArgument("limit_study: no amplitudes");
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (!(amplitudes[i] > 0.0)) throw InvalidArgument("limit_study: amplitudes must be positive");
    if (i > 0 && !(amplitudes[i] < amplitudes[i - 1]))
      throw InvalidArgument("limit_study: amplitudes must be strictly decreasing");
  }

  LimitStudy study;
  study.base = mountain_pass(Problem::forced(grid, p, profile.with_amplitude(0.0).field()), 0.0, cfg);
  const RadialField& u0 = study.base.u;
  const double h = grid->spacing();

  study.rows.resize(amplitudes.size());
  detail::parallel_for(amplitudes.size(), threads, [&](std::size_t i) {
    const ForcingTerm f = profile.with_amplitude(amplitudes[i]);
    const RadialField fv = f.field();
    const SolutionRecord rec = mountain_pass(Problem::forced(grid, p, fv), 0.0, cfg);
    LimitRow row;
    row.alpha = amplitudes[i];
    row.converged = rec.converged;
    row.level = rec.level;
    row.min_u = rec.u.min_interior();
    const RadialField diff = rec.u - u0;
    row.sup_dist = diff.sup_norm();
    for (std::size_t k = 0; k + 1 < diff.size(); ++k)
      row.c1_dist = std::max(row.c1_dist, std::abs(diff[k + 1] - diff[k]) / h);
    row.pairing = inner(fv, rec.u);
    row.forcing_norm = lp_norm(fv, f.q());
    study.rows[i] = row;
  });

  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    if (i > 0 && !(study.rows[i].sup_dist < study.rows[i - 1].sup_dist)) study.distances_decreasing = false;
    study.lipschitz = std::max(study.lipschitz, study.rows[i].sup_dist / study.rows[i].alpha);
  }
  return study;
}

double dual_norm_estimate(const RadialField& f, const std::vector<RadialField>& probes) {
  double best = 0.0;
  auto consider = [&](const RadialField& v) {
    const double gn = grad_norm(v);
    if (gn > 0.0) best = std::max(best, std::abs(inner(f, v)) / gn);
  };
  for (const auto& v : probes) consider(v);
  if (f.sup_norm() > 0.0) consider(solve_operator(f, 0.0));
  return best;
}

PsBound ps_bound_check(const SolutionRecord& record, double p, const RadialField& f,
                       const std::vector<RadialField>& probes, double slack) {
  PsBound b;
  b.dual_norm = dual_norm_estimate(f, probes);
  const double gsq = dirichlet_form(record.u, record.u);
  const double un = std::sqrt(gsq);
  b.lhs = (0.5 - 1.0 / (p + 1.0)) * gsq;
  b.rhs = record.level + 1.0 + un + (p / (p + 1.0)) * b.dual_norm * un + slack * std::max(1.0, std::abs(record.level));
  b.holds = b.lhs <= b.rhs;
  return b;
}

}  // namespace varcont
