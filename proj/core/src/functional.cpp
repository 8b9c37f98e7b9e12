#include "varcont/functional.hpp"

#include <algorithm>
#include <cmath>

#include "varcont/errors.hpp"

namespace varcont {

Problem::Problem(Mode mode, GridPtr grid, Nonlinearity nl, Potential v, bool force_positive)
    : mode_(mode),
      grid_(std::move(grid)),
      nl_(std::move(nl)),
      potential_(std::move(v)),
      v_(eval_potential(potential_, grid_)),
      f_(grid_),
      force_positive_(force_positive) {}

Problem Problem::autonomous(GridPtr grid, Nonlinearity nl, bool force_positive) {
  if (!grid) throw InvalidArgument("Problem: null grid");
  return Problem(Mode::Autonomous, std::move(grid), std::move(nl), Potential::one(), force_positive);
}

Problem Problem::weighted(GridPtr grid, Nonlinearity nl, Potential v, bool force_positive) {
  if (!grid) throw InvalidArgument("Problem: null grid");
  return Problem(Mode::Weighted, std::move(grid), std::move(nl), std::move(v), force_positive);
}

Problem Problem::forced(GridPtr grid, double exponent, RadialField forcing) {
  if (!grid) throw InvalidArgument("Problem: null grid");
  if (grid->kind() != DomainKind::Ball) throw InvalidArgument("Problem: forced mode requires a ball grid");
  if (!(exponent > 1.0 && exponent < critical_exponent(grid->dimension())))
    throw InvalidArgument("Problem: forced mode requires 1 < p < (N+2)/(N-2)");
  if (forcing.empty()) forcing = RadialField(grid);
  if (!(forcing.grid() == *grid)) throw InvalidArgument("Problem: forcing lives on a different grid");
  Problem out(Mode::Forced, grid, Nonlinearity::positive_part_power(exponent), Potential::one(), false);
  out.f_ = RadialField(grid, std::vector<double>(forcing.values().begin(), forcing.values().end()));
  return out;
}

namespace {

void require_positive_lambda(const Problem& p, double lambda, const char* who) {
  if (p.is_lambda_family() && !(lambda > 0.0))
    throw InvalidArgument(std::string(who) + ": lambda must be positive");
}

// ∫V·G(u) (λ-family) or ∫G(u) + ∫f·u (Forced).
double potential_part(const Problem& p, const RadialField& u) {
  const auto q = u.grid().quadrature_weights();
  const auto& v = p.potential_samples();
  const auto& f = p.forcing();
  double sum = 0.0;
  if (p.is_lambda_family()) {
    for (std::size_t i = 0; i < q.size(); ++i) sum += q[i] * v[i] * p.primitive(u[i]);
  } else {
    for (std::size_t i = 0; i < q.size(); ++i) sum += q[i] * (p.primitive(u[i]) + f[i] * u[i]);
  }
  return sum;
}

}  // namespace

double energy(const Problem& problem, const RadialField& u, double lambda) {
  require_positive_lambda(problem, lambda, "energy");
  if (problem.is_lambda_family()) {
    const Norms nr = norms(u, lambda);
    return 0.5 * nr.h1_sq - potential_part(problem, u);
  }
  return 0.5 * dirichlet_form(u, u) - potential_part(problem, u);
}

RadialField gradient(const Problem& problem, const RadialField& u, double lambda) {
  require_positive_lambda(problem, lambda, "gradient");
  const bool family = problem.is_lambda_family();
  RadialField out = apply_operator(u, family ? lambda : 0.0);
  const auto& v = problem.potential_samples();
  const auto& f = problem.forcing();
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    out[i] -= family ? v[i] * problem.g(u[i]) : problem.g(u[i]) + f[i];
  }
  return out;
}

EnergySplit ab_split(const Problem& problem, const RadialField& u) {
  if (!problem.is_lambda_family()) throw InvalidArgument("ab_split: not defined in forced mode");
  const Norms nr = norms(u, 0.0);
  return {0.5 * nr.grad_sq - potential_part(problem, u), -0.5 * nr.l2_sq};
}

double transfer_level(const Problem& problem, const RadialField& u, double lambda_from, double lambda_to) {
  require_positive_lambda(problem, lambda_to, "transfer_level");
  if (!problem.is_lambda_family()) throw InvalidArgument("transfer_level: not defined in forced mode");
  const double b = -0.5 * inner(u, u);
  return energy(problem, u, lambda_from) + (lambda_from - lambda_to) * b;
}

RadialField transfer_gradient(const Problem& problem, const RadialField& u, double lambda_from,
                              double lambda_to) {
  require_positive_lambda(problem, lambda_to, "transfer_gradient");
  if (!problem.is_lambda_family()) throw InvalidArgument("transfer_gradient: not defined in forced mode");
  RadialField out = gradient(problem, u, lambda_from);
  out.axpy(lambda_to - lambda_from, u);
  return out;
}

PohozaevResidual pohozaev_residual(const Problem& problem, const RadialField& u, double lambda) {
  if (problem.mode() != Mode::Autonomous)
    throw InvalidArgument("pohozaev_residual: only the autonomous identity is implemented");
  require_positive_lambda(problem, lambda, "pohozaev_residual");
  const int dim = u.grid().dimension();
  const Norms nr = norms(u, lambda);
  const double lhs = (dim - 2.0) * nr.grad_sq;
  const double rhs = 2.0 * dim * (-0.5 * lambda * nr.l2_sq + potential_part(problem, u));
  PohozaevResidual out;
  out.value = lhs - rhs;
  const double scale = std::abs(lhs) + std::abs(rhs);
  out.normalized = scale > 0.0 ? std::abs(out.value) / scale : 0.0;
  return out;
}

double nehari_residual(const Problem& problem, const RadialField& u, double lambda) {
  return inner(gradient(problem, u, lambda), u);
}

double energy_identity_gap(const Problem& problem, const RadialField& u, double lambda) {
  if (problem.mode() != Mode::Autonomous)
    throw InvalidArgument("energy_identity_gap: only meaningful in autonomous mode");
  return energy(problem, u, lambda) - dirichlet_form(u, u) / u.grid().dimension();
}

double growth_bound_check(const Nonlinearity& nl, int dimension, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("growth_bound_check: delta must be positive");
  const auto rep = check_hypotheses(nl, dimension);
  if (!rep.subcritical) throw InvalidArgument("growth_bound_check: nonlinearity is not subcritical");
  const double crit = critical_exponent(dimension);
  auto excess = [&](double s) { return (std::abs(nl.g(s)) - delta * std::abs(s)) / std::pow(std::abs(s), crit); };

  double best = 0.0;
  for (double sign : {1.0, -1.0}) {
    constexpr int samples = 2400;
    const double lo = std::log(1e-6);
    const double hi = std::log(1e6);
    const double step = (hi - lo) / samples;
    auto f = [&](double t) { return excess(sign * std::exp(t)); };
    int arg = 0;
    double val = f(lo);
    for (int k = 1; k <= samples; ++k) {
      const double v = f(lo + k * step);
      if (v > val) {
        val = v;
        arg = k;
      }
    }
    if (arg > 0 && arg < samples) {
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = lo + (arg - 1) * step;
      double b = lo + (arg + 1) * step;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double c = b - invphi * (b - a);
        const double d = a + invphi * (b - a);
        if (f(c) > f(d)) b = d; else a = c;
      }
      val = std::max(val, f(0.5 * (a + b)));
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace varcont
