#pragma once

#include "varcont/nonlinearity.hpp"
#include "varcont/radial.hpp"

namespace varcont {

enum class Mode { Autonomous, Weighted, Forced };

/// A discretized variational problem.
///
/// Autonomous: I_λ(u) = ½(‖∇u‖² + λ‖u‖²) − ∫G(u), V ≡ 1, any grid.
/// Weighted:   same with ∫V·G(u) for an admissible radial V.
/// Forced:     I_f(u) = ½‖∇u‖² − ∫G(u) − ∫f·u on a ball with g = (s⁺)^p.
///
/// With `force_positive` (λ-family modes only) g and G are evaluated at s⁺,
/// which makes every critical point nonnegative.
class Problem {
 public:
  static Problem autonomous(GridPtr grid, Nonlinearity nl, bool force_positive = true);
  static Problem weighted(GridPtr grid, Nonlinearity nl, Potential v, bool force_positive = true);
  static Problem forced(GridPtr grid, double exponent, RadialField forcing);

  Mode mode() const noexcept { return mode_; }
  bool is_lambda_family() const noexcept { return mode_ != Mode::Forced; }
  const GridPtr& grid() const noexcept { return grid_; }
  const Nonlinearity& nonlinearity() const noexcept { return nl_; }
  const Potential& potential() const noexcept { return potential_; }
  const RadialField& potential_samples() const noexcept { return v_; }
  const RadialField& forcing() const noexcept { return f_; }
  bool force_positive() const noexcept { return force_positive_; }

  double g(double s) const noexcept { return nl_.g(clip(s)); }
  double primitive(double s) const noexcept { return nl_.primitive(clip(s)); }
  double derivative(double s) const noexcept {
    return (force_positive_ && s < 0.0) ? 0.0 : nl_.derivative(s);
  }

 private:
  Problem(Mode mode, GridPtr grid, Nonlinearity nl, Potential v, bool force_positive);
  double clip(double s) const noexcept { return (force_positive_ && s < 0.0) ? 0.0 : s; }

  Mode mode_;
  GridPtr grid_;
  Nonlinearity nl_;
  Potential potential_;
  RadialField v_;
  RadialField f_;
  bool force_positive_;
};

/// I_λ(u) (λ-family) or I_f(u) (Forced; λ is ignored).
double energy(const Problem& problem, const RadialField& u, double lambda);

/// Nodal strong-form residual −Δ_h u + λu − V·g(u), or −Δ_h u − g(u) − f.
RadialField gradient(const Problem& problem, const RadialField& u, double lambda);

/// I_λ = A − λB with A(u) = ½‖∇u‖² − ∫V·G(u) and B(u) = −½‖u‖₂².
struct EnergySplit {
  double a_part = 0.0;
  double b_part = 0.0;
};

EnergySplit ab_split(const Problem& problem, const RadialField& u);

/// energy(u, λ_to) obtained from energy(u, λ_from) through the B part only.
double transfer_level(const Problem& problem, const RadialField& u, double lambda_from, double lambda_to);
/// gradient(u, λ_to) obtained as gradient(u, λ_from) + (λ_to − λ_from)·u.
RadialField transfer_gradient(const Problem& problem, const RadialField& u, double lambda_from,
                              double lambda_to);

struct PohozaevResidual {
  double value = 0.0;       ///< (N−2)‖∇u‖² − 2N[−(λ/2)‖u‖² + ∫G(u)]
  double normalized = 0.0;  ///< value / ((N−2)‖∇u‖² + |2N[…]|)
};

/// Autonomous mode only.
PohozaevResidual pohozaev_residual(const Problem& problem, const RadialField& u, double lambda);

/// integrate(gradient(u)·u) = I'(u)u.
double nehari_residual(const Problem& problem, const RadialField& u, double lambda);

/// I_λ(u) − ‖∇u‖²/N; autonomous mode only.
double energy_identity_gap(const Problem& problem, const RadialField& u, double lambda);

/// Smallest sampled C with |g(s)| ≤ δ|s| + C|s|^{(N+2)/(N−2)} on a log grid of s.
double growth_bound_check(const Nonlinearity& nl, int dimension, double delta);

}  // namespace varcont
