#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "varcont/solvers.hpp"

namespace varcont {

/// f = α·profile with ‖profile‖_q = 1 and q > N/2.
class ForcingTerm {
 public:
  /// Normalizes `profile` to unit L^q norm. Throws InvalidArgument for q ≤ N/2,
  /// α < 0 or a zero profile.
  ForcingTerm(RadialField profile, double q, double amplitude);

  const RadialField& profile() const noexcept { return profile_; }
  double q() const noexcept { return q_; }
  double amplitude() const noexcept { return amplitude_; }
  RadialField field() const { return amplitude_ * profile_; }
  ForcingTerm with_amplitude(double amplitude) const;

 private:
  RadialField profile_;
  double q_;
  double amplitude_;
};

struct GeometryConstants {
  double a = 0.0;
  double b = 0.0;
  double beta = 0.0;
  double c_sobolev = 0.0;  ///< measured (a lower estimate of the embedding constant)
  double c_used = 0.0;     ///< 2·c_sobolev, the value fed into a, b, β
};

/// Probes for the embedding constant: the ball ground state, 8 tents and
/// `random_fields` random smooth fields drawn from `seed`.
std::vector<RadialField> sobolev_probes(const GridPtr& grid, double p, std::uint64_t seed, int random_fields = 50);

/// max over probes of max(‖u‖_{p+1}^{p+1} / ‖∇u‖^{p+1}, ‖u‖_{q'} / ‖∇u‖). Needs at least one probe.
double measure_sobolev_constant(const std::vector<RadialField>& probes, double p, double q);
/// Ball grid and 1 < p < (N+2)/(N−2) required.
double measure_sobolev_constant(const GridPtr& grid, double p, double q, std::uint64_t seed);

/// a = (1/(4C))^{1/(p−1)}, b = a²/8, β = a/(8C) with C = 2·measured.
GeometryConstants geometry_from_constant(double c_sobolev, double p);
GeometryConstants geometry_constants(const GridPtr& grid, double p, double q, std::uint64_t seed);

struct ForcedSolution {
  SolutionRecord record;
  /// max_{t>0} I_f(t·u_probe) for the positive ball ground state as probe.
  double ray_max = 0.0;
  /// level ≤ ray_max + (h/R)²·max(1, |ray_max|).
  bool level_bound_holds = false;
  /// Only meaningful with geometry: α ≤ β.
  bool within_geometry = true;
  /// (u_n − u_{n+1})/h at the last interior node.
  double boundary_slope = 0.0;
};

/// max_{t>0} energy(P, t·v) by bracketing and golden section.
double ray_maximum(const Problem& problem, const RadialField& v);

ForcedSolution solve_forced(const GridPtr& grid, double p, const ForcingTerm& f, const MountainPassConfig& cfg,
                            const std::optional<GeometryConstants>& geometry = std::nullopt);

struct ThresholdProbe {
  double alpha = 0.0;
  bool converged = false;
  double level = 0.0;
  double min_u = 0.0;
  bool positive = false;
};

struct ThresholdResult {
  double alpha_hat = 0.0;
  double alpha_max = 0.0;
  /// Every probe up to α_max was positive; α̂ = α_max is then only a lower witness.
  bool degenerate = false;
  /// Upper end of the final bracket (first verified nonpositive α), NaN if degenerate.
  double alpha_fail = 0.0;
  std::vector<ThresholdProbe> probes;
  /// Positive probes observed above a nonpositive one.
  std::vector<double> non_monotone;
};

/// Coarse scan of 8 equispaced α in ]0, α_max], then bisection down to a bracket
/// of width ≤ `resolution`. Throws NoPositiveSolutionAtZero if the unforced solve fails.
ThresholdResult positivity_threshold(const GridPtr& grid, double p, const ForcingTerm& profile,
                                     const MountainPassConfig& cfg, double alpha_max, double resolution);

struct LimitRow {
  double alpha = 0.0;
  double sup_dist = 0.0;
  double c1_dist = 0.0;
  double level = 0.0;
  double min_u = 0.0;
  double pairing = 0.0;      ///< ∫f·u = I(u) − I_f(u)
  double forcing_norm = 0.0; ///< ‖f‖_q = ‖I'(u) − I_f'(u)‖ in the L^q sense
  bool converged = false;
};

struct LimitStudy {
  SolutionRecord base;  ///< α = 0
  std::vector<LimitRow> rows;
  bool distances_decreasing = true;
  /// max sup_dist / α.
  double lipschitz = 0.0;
};

/// Amplitudes must be positive and strictly decreasing.
LimitStudy limit_study(const GridPtr& grid, double p, const ForcingTerm& profile,
                       const std::vector<double>& amplitudes, const MountainPassConfig& cfg, int threads = 1);

/// max over probes (plus the Riesz representer of f) of ∫f·v / ‖∇v‖.
double dual_norm_estimate(const RadialField& f, const std::vector<RadialField>& probes);

struct PsBound {
  double dual_norm = 0.0;
  double lhs = 0.0;  ///< (½ − 1/(p+1))‖∇u‖²
  double rhs = 0.0;  ///< c_f + 1 + ‖∇u‖ + (p/(p+1))‖f‖_dual‖∇u‖ + slack
  bool holds = false;
};

/// ‖f‖_dual from dual_norm_estimate(f, probes); ‖·‖ is the Dirichlet norm of record.u.
PsBound ps_bound_check(const SolutionRecord& record, double p, const RadialField& f,
                       const std::vector<RadialField>& probes, double slack = 1e-9);

}  // namespace varcont
