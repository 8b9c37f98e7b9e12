#include "varcont/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "varcont/errors.hpp"

namespace varcont {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double kappa_inner(const RadialField& a, const RadialField& b, double kappa) {
  return dirichlet_form(a, b) + kappa * inner(a, b);
}

RadialField lerp(const RadialField& a, const RadialField& b, double t) {
  RadialField out = a;
  out *= 1.0 - t;
  out.axpy(t, b);
  return out;
}

}  // namespace

void MountainPassConfig::validate() const {
  if (path_points < 5) throw InvalidArgument("MountainPassConfig: path_points must be >= 5");
  if (!(grad_tol > 0.0)) throw InvalidArgument("MountainPassConfig: grad_tol must be positive");
  if (max_outer_iters < 1) throw InvalidArgument("MountainPassConfig: max_outer_iters must be >= 1");
  if (!(initial_step > 0.0)) throw InvalidArgument("MountainPassConfig: initial_step must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidArgument("MountainPassConfig: shrink must lie in ]0,1[");
  if (!(sufficient_decrease > 0.0 && sufficient_decrease < 1.0))
    throw InvalidArgument("MountainPassConfig: sufficient_decrease must lie in ]0,1[");
  if (reparametrize_every < 1) throw InvalidArgument("MountainPassConfig: reparametrize_every must be >= 1");
  if (!(newton_switch > 0.0)) throw InvalidArgument("MountainPassConfig: newton_switch must be positive");
}

double preconditioner_shift(const Problem& problem, double lambda) {
  return problem.is_lambda_family() ? std::max(lambda, 1.0) : 1.0;
}

double relative_residual(const Problem& problem, const RadialField& u, double lambda) {
  const double kappa = preconditioner_shift(problem, lambda);
  const RadialField d = solve_operator(gradient(problem, u, lambda), kappa);
  const double num = h1_norm(d, kappa);
  const double den = h1_norm(u, kappa);
  return den > 0.0 ? num / den : num;
}

SolutionRecord make_record(const Problem& problem, RadialField u, double lambda, bool converged, int iterations) {
  SolutionRecord rec;
  rec.lambda = lambda;
  const bool family = problem.is_lambda_family();
  const double eval_lambda = family ? lambda : 1.0;
  const RadialField f = gradient(problem, u, eval_lambda);
  const Norms nr = norms(u, family ? lambda : 0.0);
  rec.level = energy(problem, u, eval_lambda);
  rec.grad_residual = relative_residual(problem, u, eval_lambda);
  rec.grad_residual_l2 = std::sqrt(inner(f, f));
  rec.l2_sq = nr.l2_sq;
  rec.grad_sq = nr.grad_sq;
  const double nehari = inner(f, u);
  rec.nehari_residual = nr.h1_sq > 0.0 ? std::abs(nehari) / nr.h1_sq : std::abs(nehari);
  if (problem.mode() == Mode::Autonomous) {
    rec.pohozaev_residual = pohozaev_residual(problem, u, lambda).normalized;
    const double gap = std::abs(energy_identity_gap(problem, u, lambda));
    rec.energy_identity_residual = rec.level != 0.0 ? gap / std::abs(rec.level) : gap;
  } else {
    rec.pohozaev_residual = kNaN;
    rec.energy_identity_residual = kNaN;
  }
  rec.positive = true;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) rec.positive = rec.positive && u[i] > 0.0;
  rec.converged = converged;
  rec.iterations = iterations;
  rec.u = std::move(u);
  return rec;
}

RadialField endpoint_profile(const GridPtr& grid, double rho) {
  return RadialField::from_function(grid, [rho](double r) {
    const double x = 1.0 - (r / rho) * (r / rho);
    return x > 0.0 ? x * x : 0.0;
  });
}

RadialField endpoint_profile(const GridPtr& grid) { return endpoint_profile(grid, std::min(grid->radius() / 2.0, 5.0)); }

RadialField find_endpoint(const Problem& problem, double lambda) {
  // Wider bumps have a smaller Rayleigh quotient, which matters when λ is close to λ*.
  const double r_max = 0.9 * problem.grid()->radius();
  for (double rho = std::min(problem.grid()->radius() / 2.0, 5.0);; rho = std::min(2.0 * rho, r_max)) {
    const RadialField phi = endpoint_profile(problem.grid(), rho);
    double t = 1.0;
    for (int k = 0; k <= 60; ++k, t *= 2.0) {
      RadialField e = t * phi;
      if (energy(problem, e, lambda) < 0.0) return e;
    }
    if (rho >= r_max) break;
  }
  throw EndpointNotFound("find_endpoint: energy stays nonnegative along t*phi after 60 doublings "
                         "(lambda >= lambda* or inadmissible data)");
}

void check_admissible_lambda(const Problem& problem, double lambda) {
  if (!problem.is_lambda_family()) return;
  if (!(lambda > 0.0)) throw LambdaOutOfRange("lambda must be positive", lambda, 0.0);
  if (problem.mode() != Mode::Autonomous) return;
  const LambdaStar ls = lambda_star(problem.nonlinearity());
  if (!ls.infinite() && lambda >= ls.value - 1e-9) {
    throw LambdaOutOfRange("lambda = " + std::to_string(lambda) + " is outside ]0, lambda*[ with lambda* = " +
                               std::to_string(ls.value),
                           lambda, ls.value);
  }
}

namespace {

class PathSolver {
 public:
  PathSolver(const Problem& problem, double lambda, const MountainPassConfig& cfg)
      : p_(problem), lambda_(problem.is_lambda_family() ? lambda : 1.0), cfg_(cfg),
        kappa_(preconditioner_shift(problem, lambda)) {}

  void init_cold() {
    const RadialField e = find_endpoint(p_, lambda_);
    const int m = cfg_.path_points - 1;
    nodes_.clear();
    for (int j = 0; j <= m; ++j) nodes_.push_back((static_cast<double>(j) / m) * e);
    refresh_energies();
  }

  void init_warm(RadialField w) {
    if (!(w.grid() == *p_.grid())) throw InvalidArgument("mountain_pass: warm start lives on a different grid");
    if (p_.is_lambda_family() && w[0] < 0.0) w *= -1.0;
    RadialField e = w;
    bool found = false;
    for (int k = 0; k <= 60 && !found; ++k) {
      e *= 2.0;
      found = energy(p_, e, lambda_) < 0.0;
    }
    if (!found) throw EndpointNotFound("mountain_pass: no negative-energy endpoint along the warm-start ray");
    const int m = cfg_.path_points - 1;
    const int half = m / 2;
    nodes_.clear();
    for (int j = 0; j <= half; ++j) nodes_.push_back((static_cast<double>(j) / half) * w);
    for (int j = half + 1; j <= m; ++j) nodes_.push_back(lerp(w, e, static_cast<double>(j - half) / (m - half)));
    refresh_energies();
  }

  // Returns the converged field, or nullopt with `last_peak()` holding the best iterate.
  std::optional<RadialField> run(std::vector<std::pair<double, double>>& trace) {
    const int m = static_cast<int>(nodes_.size()) - 1;
    double next_newton = cfg_.newton_switch;
    int retry_at = cfg_.max_outer_iters;
    for (iterations_ = 0; iterations_ < cfg_.max_outer_iters; ++iterations_) {
      if (iterations_ > 0 && iterations_ % cfg_.reparametrize_every == 0) reparametrize();

      int k = 1;
      for (int j = 2; j < m; ++j)
        if (energies_[j] > energies_[k]) k = j;

      RadialField g = gradient(p_, nodes_[k], lambda_);
      RadialField tangent = nodes_[k + 1] - nodes_[k - 1];
      slide_to_polyline_max(k, g, tangent);

      const RadialField& z = nodes_[k];
      peak_ = z;
      const double zn = h1_norm(z, kappa_);
      if (zn < 1e-10) throw CollapsedToZero("mountain_pass: path peak collapsed to zero");
      RadialField d = solve_operator(g, kappa_);
      const double res = h1_norm(d, kappa_) / zn;
      if (res <= cfg_.grad_tol) return z;

      if (res <= next_newton) {
        if (auto sol = try_newton(z, zn)) return sol;
        next_newton = 0.5 * res;
        retry_at = iterations_ + 50;
      } else if (iterations_ >= retry_at && res <= 2.0 * cfg_.newton_switch) {
        // the descent tends to plateau once the path resolution is the limiting error
        if (auto sol = try_newton(z, zn)) return sol;
        retry_at = iterations_ + 50;
      }

      const double tt = kappa_inner(tangent, tangent, kappa_);
      if (tt > 0.0) d.axpy(-kappa_inner(d, tangent, kappa_) / tt, tangent);
      const double slope = inner(g, d);

      bool accepted = false;
      if (slope > 0.0) {
        const double e0 = energies_[k];
        double sigma = cfg_.initial_step;
        for (int s = 0; s < 60; ++s, sigma *= cfg_.shrink) {
          RadialField trial = z;
          trial.axpy(-sigma, d);
          const double et = energy(p_, trial, lambda_);
          if (et <= e0 - cfg_.sufficient_decrease * sigma * slope) {
            nodes_[k] = std::move(trial);
            energies_[k] = et;
            accepted = true;
            break;
          }
        }
        if (accepted) {
          const double after = *std::max_element(energies_.begin() + 1, energies_.end() - 1);
          if (after > e0) throw std::logic_error("mountain_pass: accepted step increased the path maximum");
          trace.emplace_back(e0, after);
        }
      }
      if (!accepted) {
        // Descent stalled: the discrete energy and the nodal residual disagree at
        // this scale, so the remaining distance is Newton's job.
        return try_newton(peak_, zn);
      }
    }
    return std::nullopt;
  }

  const RadialField& last_peak() const noexcept { return peak_; }
  int iterations() const noexcept { return iterations_; }

 private:
  void refresh_energies() {
    energies_.resize(nodes_.size());
    for (std::size_t j = 0; j < nodes_.size(); ++j) energies_[j] = energy(p_, nodes_[j], lambda_);
  }

  std::optional<RadialField> try_newton(const RadialField& z, double zn) const {
    RadialField cand = newton_refine(p_, z, lambda_);
    if (relative_residual(p_, cand, lambda_) > cfg_.grad_tol) return std::nullopt;
    if (h1_norm(cand - z, kappa_) > 0.5 * zn) return std::nullopt;  // jumped to another critical point
    return cand;
  }

  // Moves node k to the energy maximum along the uphill adjacent segment, and
  // refreshes the gradient and the tangent accordingly.
  void slide_to_polyline_max(int k, RadialField& g, RadialField& tangent) {
    const RadialField& z = nodes_[k];
    RadialField best_dir;
    double best_slope = 0.0;
    for (int side : {-1, 1}) {
      RadialField dir = nodes_[k + side] - z;
      const double slope = inner(g, dir);
      if (slope > best_slope) {
        best_slope = slope;
        best_dir = std::move(dir);
      }
    }
    if (best_dir.empty()) return;

    auto phi = [&](double s) {
      RadialField x = z;
      x.axpy(s, best_dir);
      return energy(p_, x, lambda_);
    };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = phi(c), fd = phi(d);
    for (int it = 0; it < 24; ++it) {
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
    const double s = 0.5 * (a + b);
    const double es = phi(s);
    if (!(es > energies_[k])) return;
    RadialField moved = z;
    moved.axpy(s, best_dir);
    nodes_[k] = std::move(moved);
    energies_[k] = es;
    tangent = std::move(best_dir);
    g = gradient(p_, nodes_[k], lambda_);
  }

  // Equal H¹_κ arclength redistribution along the current polyline.
  void reparametrize() {
    const std::size_t count = nodes_.size();
    std::vector<double> arc(count, 0.0);
    for (std::size_t j = 1; j < count; ++j) arc[j] = arc[j - 1] + h1_norm(nodes_[j] - nodes_[j - 1], kappa_);
    const double total = arc.back();
    if (!(total > 0.0)) return;
    std::vector<RadialField> out;
    out.reserve(count);
    out.push_back(nodes_.front());
    std::size_t seg = 0;
    for (std::size_t j = 1; j + 1 < count; ++j) {
      const double target = total * static_cast<double>(j) / static_cast<double>(count - 1);
      while (seg + 2 < count && arc[seg + 1] < target) ++seg;
      const double len = arc[seg + 1] - arc[seg];
      const double t = len > 0.0 ? std::clamp((target - arc[seg]) / len, 0.0, 1.0) : 0.0;
      out.push_back(lerp(nodes_[seg], nodes_[seg + 1], t));
    }
    out.push_back(nodes_.back());
    nodes_ = std::move(out);
    refresh_energies();
  }

  const Problem& p_;
  double lambda_;
  MountainPassConfig cfg_;
  double kappa_;
  std::vector<RadialField> nodes_;
  std::vector<double> energies_;
  RadialField peak_;
  int iterations_ = 0;
};

}  // namespace

SolutionRecord mountain_pass(const Problem& problem, double lambda, const MountainPassConfig& cfg,
                             const std::optional<RadialField>& warm_start) {
  cfg.validate();
  check_admissible_lambda(problem, lambda);
  PathSolver solver(problem, lambda, cfg);
  bool seeded = false;
  if (warm_start) {
    // near λ* the previous solution can be too steep to reach negative energy along its ray
    try {
      solver.init_warm(*warm_start);
      seeded = true;
    } catch (const EndpointNotFound&) {
    }
  }
  if (!seeded) solver.init_cold();

  std::vector<std::pair<double, double>> trace;
  std::optional<RadialField> sol = solver.run(trace);
  const double eval_lambda = problem.is_lambda_family() ? lambda : 1.0;
  SolutionRecord rec;
  if (sol) {
    RadialField u = newton_refine(problem, *sol, eval_lambda);
    if (problem.is_lambda_family() && u[0] < 0.0) u *= -1.0;
    rec = make_record(problem, std::move(u), lambda, true, solver.iterations());
    rec.converged = rec.grad_residual <= cfg.grad_tol;
  } else {
    rec = make_record(problem, solver.last_peak(), lambda, false, solver.iterations());
    rec.converged = false;
  }
  rec.descent_trace = std::move(trace);
  return rec;
}

RadialField newton_refine(const Problem& problem, const RadialField& u, double lambda, int max_iters, double tol) {
  const bool family = problem.is_lambda_family();
  const double eval_lambda = family ? lambda : 1.0;
  const RadialGrid& grid = u.grid();
  const auto& v = problem.potential_samples();
  const double r0 = relative_residual(problem, u, eval_lambda);
  if (r0 <= tol) return u;

  RadialField cur = u;
  double r = r0;
  for (int it = 0; it < max_iters; ++it) {
    const RadialField f = gradient(problem, cur, eval_lambda);
    Tridiagonal jac = operator_matrix(grid, family ? lambda : 0.0);
    for (std::size_t i = 0; i < jac.size(); ++i) {
      jac.diag[i] -= (family ? v[i] : 1.0) * problem.derivative(cur[i]);
    }
    std::vector<double> delta(f.values().begin(), f.values().end() - 1);
    if (!solve_tridiagonal(std::move(jac), delta)) break;
    delta.push_back(0.0);
    const RadialField step(u.grid_ptr(), std::move(delta));

    bool accepted = false;
    double sigma = 1.0;
    for (int attempt = 0; attempt < 5; ++attempt, sigma *= 0.5) {
      RadialField trial = cur;
      trial.axpy(-sigma, step);
      const double rt = relative_residual(problem, trial, eval_lambda);
      if (rt < r) {
        cur = std::move(trial);
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted || r <= tol) break;
  }
  return r < r0 ? cur : u;
}

}  // namespace varcont
