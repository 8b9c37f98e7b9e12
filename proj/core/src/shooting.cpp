#include <algorithm>
#include <cmath>
#include <vector>

#include "varcont/errors.hpp"
#include "varcont/solvers.hpp"

namespace varcont {

namespace {

constexpr double kShootStep = 1e-3;

enum class Outcome { Crossing, Rebound, Unresolved };

struct Shot {
  Outcome outcome = Outcome::Unresolved;
  std::vector<double> u;
  std::vector<double> du;
};

// RK4 for u'' + ((N-1)/r) u' = rhs(u) from r = 0 with u(0) = d, u'(0) = 0.
// The first step uses the Taylor start u = d + c r²/2, c = rhs(d)/N.
template <class Rhs>
Shot shoot(int dimension, double d, Rhs rhs, double r_max, bool keep, bool stop_on_rebound) {
  Shot shot;
  const double h = kShootStep;
  const double nm1 = dimension - 1;
  const double c = rhs(d) / dimension;
  double u = d + 0.5 * c * h * h;
  double du = c * h;
  if (keep) {
    shot.u = {d, u};
    shot.du = {0.0, du};
  }
  auto accel = [&](double r, double x, double dx) { return rhs(x) - nm1 / r * dx; };
  const auto steps = static_cast<std::size_t>(std::ceil(r_max / h));
  for (std::size_t i = 1; i < steps; ++i) {
    if (u <= 0.0 || !std::isfinite(u)) {
      shot.outcome = Outcome::Crossing;
      return shot;
    }
    if (stop_on_rebound && du >= 0.0) {
      shot.outcome = Outcome::Rebound;
      return shot;
    }
    const double r = i * h;
    const double k1u = du, k1v = accel(r, u, du);
    const double k2u = du + 0.5 * h * k1v, k2v = accel(r + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1v);
    const double k3u = du + 0.5 * h * k2v, k3v = accel(r + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2v);
    const double k4u = du + h * k3v, k4v = accel(r + h, u + h * k3u, du + h * k3v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    du += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (keep) {
      shot.u.push_back(u);
      shot.du.push_back(du);
    }
  }
  return shot;
}

double hermite(double x0, double h, double u0, double u1, double d0, double d1, double x) {
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * h * d1;
}

}  // namespace

ShootingProfile::ShootingProfile(int dimension, double lambda, double step, double height, std::vector<double> u,
                                 std::vector<double> du, double tail_start)
    : dimension_(dimension), lambda_(lambda), step_(step), height_(height), u_(std::move(u)), du_(std::move(du)),
      tail_start_(tail_start) {}

double ShootingProfile::operator()(double r) const {
  if (r < tail_start_) {
    const auto i = std::min(static_cast<std::size_t>(r / step_), u_.size() - 2);
    return hermite(i * step_, step_, u_[i], u_[i + 1], du_[i], du_[i + 1], r);
  }
  const auto i = static_cast<std::size_t>(std::lround(tail_start_ / step_));
  const double u0 = u_[i];
  return u0 * std::pow(tail_start_ / r, 0.5 * (dimension_ - 1)) * std::exp(-std::sqrt(lambda_) * (r - tail_start_));
}

ShootingProfile shoot_ground_state(int dimension, double lambda, const Nonlinearity& nl) {
  if (dimension < 3) throw InvalidArgument("shoot_ground_state: dimension must be >= 3");
  if (!(lambda > 0.0)) throw InvalidArgument("shoot_ground_state: lambda must be positive");
  const bool supported = nl.pure_power_exponent().has_value() ||
                         std::holds_alternative<SaturatingCubic>(nl.family());
  if (!supported) throw InvalidArgument("shoot_ground_state: needs a pure power or the saturating cubic");

  auto rhs = [&](double x) { return lambda * x - nl.g(x); };
  const double r_max = 50.0 / std::sqrt(lambda) + 10.0;
  auto classify = [&](double d) {
    const Outcome o = shoot(dimension, d, rhs, r_max, false, true).outcome;
    return o == Outcome::Unresolved ? Outcome::Rebound : o;
  };

  // First Rebound -> Crossing transition on a log scan of [1e-4, 1e4].
  double lo = 0.0, hi = 0.0;
  bool found = false;
  Outcome prev = classify(1e-4);
  for (int k = 1; k <= 64 && !found; ++k) {
    const double d = 1e-4 * std::pow(10.0, k / 8.0);
    const Outcome cur = classify(d);
    if (prev == Outcome::Rebound && cur == Outcome::Crossing) {
      lo = 1e-4 * std::pow(10.0, (k - 1) / 8.0);
      hi = d;
      found = true;
    }
    prev = cur;
  }
  if (!found)
    throw BracketNotFound("shoot_ground_state: no (rebound, crossing) bracket for d in [1e-4, 1e4]");

  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (classify(mid) == Outcome::Crossing ? hi : lo) = mid;
  }

  const Shot below = shoot(dimension, lo, rhs, r_max, true, true);
  const Shot above = shoot(dimension, hi, rhs, r_max, true, false);
  const std::size_t common = std::min(below.u.size(), above.u.size());
  std::vector<double> u(common), du(common);
  std::size_t tail = common - 2;
  for (std::size_t i = 0; i < common; ++i) {
    u[i] = 0.5 * (below.u[i] + above.u[i]);
    du[i] = 0.5 * (below.du[i] + above.du[i]);
    // The two shots bracket the ground state; once they separate at the 1e-3
    // relative level the tail is replaced by the linearized decay.
    if (i > 0 && std::abs(below.u[i] - above.u[i]) > 1e-3 * std::abs(u[i])) {
      tail = i - 1;
      break;
    }
  }
  u.resize(tail + 2);
  du.resize(tail + 2);
  return ShootingProfile(dimension, lambda, kShootStep, 0.5 * (lo + hi), std::move(u), std::move(du),
                         tail * kShootStep);
}

RadialField shooting_ground_state(int dimension, double lambda, const Nonlinearity& nl, const GridPtr& grid) {
  if (grid->dimension() != dimension) throw InvalidArgument("shooting_ground_state: grid dimension mismatch");
  const ShootingProfile profile = shoot_ground_state(dimension, lambda, nl);
  return RadialField::from_function(grid, [&](double r) { return profile(r); });
}

RadialField shooting_ball_ground_state(double exponent, const GridPtr& grid) {
  const int dim = grid->dimension();
  if (!(exponent > 1.0 && exponent < critical_exponent(dim)))
    throw InvalidArgument("shooting_ball_ground_state: need 1 < p < (N+2)/(N-2)");
  // Lane-Emden: w'' + ((N-1)/r) w' = -w^p, w(0) = 1, first zero xi1.
  auto rhs = [&](double x) { return x > 0.0 ? -std::pow(x, exponent) : 0.0; };
  const Shot shot = shoot(dim, 1.0, rhs, 200.0, true, false);
  if (shot.outcome != Outcome::Crossing) throw BracketNotFound("shooting_ball_ground_state: no first zero");
  // Last stored node is the first one with w <= 0; locate the root inside the
  // final cell by bisection on the Hermite interpolant.
  const std::size_t j = shot.u.size() - 1;
  const double x0 = (j - 1) * kShootStep;
  auto w = [&](double x) { return hermite(x0, kShootStep, shot.u[j - 1], shot.u[j], shot.du[j - 1], shot.du[j], x); };
  double a = x0, b = x0 + kShootStep;
  for (int it = 0; it < 100; ++it) {
    const double m = 0.5 * (a + b);
    (w(m) > 0.0 ? a : b) = m;
  }
  const double xi1 = 0.5 * (a + b);
  const double radius = grid->radius();
  const double height = std::pow(xi1 / radius, 2.0 / (exponent - 1.0));
  return RadialField::from_function(grid, [&](double r) {
    const double x = xi1 * r / radius;
    if (x >= xi1) return 0.0;
    const auto i = std::min(static_cast<std::size_t>(x / kShootStep), j - 1);
    return height * hermite(i * kShootStep, kShootStep, shot.u[i], shot.u[i + 1], shot.du[i], shot.du[i + 1], x);
  });
}

}  // namespace varcont
