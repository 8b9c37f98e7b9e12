#pragma once

#include <optional>
#include <vector>

#include "varcont/functional.hpp"

namespace varcont {

struct MountainPassConfig {
  int path_points = 41;
  int max_outer_iters = 5000;
  /// On ‖K⁻¹ gradient‖ / ‖u‖ in the H¹_κ norm, κ = max(λ, 1).
  double grad_tol = 1e-8;
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int reparametrize_every = 10;
  /// Relative residual below which the peak is handed to newton_refine.
  double newton_switch = 5e-2;

  void validate() const;
};

/// A computed critical point with its diagnostics.
///
/// Residual conventions: grad_residual is the relative preconditioned residual
/// used for convergence; grad_residual_l2 is ‖gradient‖ in L² (absolute);
/// pohozaev_residual is normalized; nehari_residual is I'(u)u divided by the
/// H¹_λ norm squared; energy_identity_residual is |I − ‖∇u‖²/N| / |I|.
/// Residuals that do not apply to the mode are NaN.
struct SolutionRecord {
  double lambda = 0.0;  ///< λ, or the forcing amplitude α in forced mode
  RadialField u;
  double level = 0.0;
  double grad_residual = 0.0;
  double grad_residual_l2 = 0.0;
  double pohozaev_residual = 0.0;
  double nehari_residual = 0.0;
  double energy_identity_residual = 0.0;
  double l2_sq = 0.0;
  double grad_sq = 0.0;
  bool positive = false;
  bool converged = false;
  int iterations = 0;
  /// Path maximum right before and right after each accepted descent step.
  std::vector<std::pair<double, double>> descent_trace;
};

/// max(λ, 1) for λ-family problems, 1 in forced mode.
double preconditioner_shift(const Problem& problem, double lambda);

/// ‖K⁻¹ gradient(u)‖_κ / ‖u‖_κ (absolute when u = 0).
double relative_residual(const Problem& problem, const RadialField& u, double lambda);

/// Fills every diagnostic of a record for a given field.
SolutionRecord make_record(const Problem& problem, RadialField u, double lambda, bool converged, int iterations);

/// The bump φ(r) = max(1 − (r/ρ)², 0)², ρ = min(R/2, 5) unless given.
RadialField endpoint_profile(const GridPtr& grid);
RadialField endpoint_profile(const GridPtr& grid, double rho);

/// t·φ with t doubled from 1 until the energy is negative. If 60 doublings do not
/// suffice, ρ is doubled (up to 0.9R) and the search repeats; then EndpointNotFound.
RadialField find_endpoint(const Problem& problem, double lambda);

/// Throws LambdaOutOfRange unless λ lies in ]0, λ* − 1e-9[ (autonomous mode).
void check_admissible_lambda(const Problem& problem, double lambda);

/// Path-deformation mountain-pass solve with H¹-preconditioned descent and Newton polishing.
///
/// Throws CollapsedToZero if the path peak degenerates to 0; non-convergence is
/// reported through `converged = false`.
SolutionRecord mountain_pass(const Problem& problem, double lambda, const MountainPassConfig& cfg,
                             const std::optional<RadialField>& warm_start = std::nullopt);

/// Damped Newton on the nodal residual with the tridiagonal Jacobian. Best effort.
RadialField newton_refine(const Problem& problem, const RadialField& u, double lambda, int max_iters = 30,
                          double tol = 1e-12);

/// Dense RK4 solution of u'' + ((N−1)/r) u' = λu − g(u), u(0) = d, u'(0) = 0,
/// for the bisected ground-state height d, with an exponential tail past the
/// point where the shot becomes unreliable.
class ShootingProfile {
 public:
  ShootingProfile(int dimension, double lambda, double step, double height, std::vector<double> u,
                  std::vector<double> du, double tail_start);

  double operator()(double r) const;
  double height() const noexcept { return height_; }
  double tail_start() const noexcept { return tail_start_; }

 private:
  int dimension_;
  double lambda_;
  double step_;
  double height_;
  std::vector<double> u_;
  std::vector<double> du_;
  double tail_start_;
};

/// Throws BracketNotFound when no (Crossing, Rebound) pair exists in d ∈ [1e-4, 1e4].
ShootingProfile shoot_ground_state(int dimension, double lambda, const Nonlinearity& nl);

/// shoot_ground_state sampled onto `grid` (Dirichlet node zero).
RadialField shooting_ground_state(int dimension, double lambda, const Nonlinearity& nl, const GridPtr& grid);

/// Positive solution of −Δu = u^p on the ball of radius R with u = 0 on the
/// boundary, from the rescaled Lane–Emden profile.
RadialField shooting_ball_ground_state(double exponent, const GridPtr& grid);

}  // namespace varcont
