#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varcont/solvers.hpp"

namespace varcont {

/// A λ point that produced no converged record.
struct Gap {
  double lambda = 0.0;
  std::string reason;
};

/// Converged records by ascending λ. Non-converged or rejected λ become gaps.
struct Branch {
  std::vector<SolutionRecord> records;
  std::vector<double> lambda_grid;
  std::vector<Gap> gaps;
  bool warm_started = true;
};

/// lo, lo + step, ..., up to hi (inclusive within 1e-9 step). Each value is lo + k*step.
std::vector<double> lambda_range(double lo, double hi, double step);

/// Solves at every λ of a strictly increasing grid. Warm mode chains the previous
/// converged solution into the next solve and is sequential; cold mode solves
/// each λ independently on up to `threads` workers.
Branch sweep(const Problem& problem, const std::vector<double>& lambda_grid, const MountainPassConfig& cfg,
             bool warm, int threads = 1);

/// Index of the record whose λ equals `lambda` up to 1e-12 relative, or nullopt.
std::optional<std::size_t> find_record(const Branch& branch, double lambda);

struct BranchDiagnostics {
  double level_min = 0.0;
  double level_max = 0.0;
  bool monotone = true;
  double max_level_jump = 0.0;
  /// H¹ distance (κ = 1) between consecutive records.
  double max_field_jump = 0.0;
  double max_h1_sq = 0.0;  ///< max over records of ‖∇u‖² + λ‖u‖²
  std::size_t size = 0;
};

/// Throws InvalidArgument for an empty branch.
BranchDiagnostics diagnose(const Branch& branch);

struct ScalingEntry {
  double lambda = 0.0;
  double ratio = 0.0;     ///< level(λ) / level(λ_ref)
  double expected = 0.0;  ///< (λ/λ_ref)^θ
  double rel_deviation = 0.0;
};

struct ScalingReport {
  double theta = 0.0;
  double lambda_ref = 0.0;
  std::vector<ScalingEntry> entries;
  double max_rel_deviation = 0.0;
};

/// θ = 2/(p−1) + 1 − N/2 from u_λ(x) = λ^{1/(p−1)} u_1(√λ x).
double scaling_exponent(double p, int dimension);

/// Autonomous pure power only (InvalidArgument otherwise); λ_ref must be on the branch.
ScalingReport scaling_check(const Problem& problem, const Branch& branch, double lambda_ref = 1.0);

struct TransferEntry {
  double lambda = 0.0;
  double residual = 0.0;        ///< ‖gradient(u_n, λ0)‖₂
  double residual_bound = 0.0;  ///< grad_residual_l2 + |λ_n − λ0|·‖u_n‖₂ + slack
  double level_gap = 0.0;       ///< |energy(u_n, λ0) − level_n|
  double level_bound = 0.0;     ///< 2|λ_n − λ0|·|B(u_n)| + slack
  bool ok = false;
};

struct TransferReport {
  double lambda0 = 0.0;
  std::vector<TransferEntry> entries;
  bool all_ok = true;
  /// max residual / |λ_n − λ0| over λ_n ≠ λ0.
  double residual_lipschitz = 0.0;
  double level_lipschitz = 0.0;
  /// Least-squares slope of log residual against log |λ_n − λ0|.
  double residual_decay_order = 0.0;
};

/// `slack_rel` is relative to max(1, ‖u_n‖₂) and max(1, |level_n|) respectively.
TransferReport ps_transfer_check(const Problem& problem, const Branch& branch, double lambda0,
                                 double slack_rel = 1e-6);

struct LimitEntry {
  double lambda = 0.0;
  double distance = 0.0;  ///< H¹ (κ = 1) distance to the record at λ0
};

struct LimitReport {
  double lambda0 = 0.0;
  std::vector<LimitEntry> entries;
  double max_distance = 0.0;
  double decay_order = 0.0;  ///< log-log slope over entries with λ ≠ λ0
};

/// Uses the `neighbors` nearest records on each side of λ0, which must be on the branch.
LimitReport branch_limit_check(const Branch& branch, double lambda0, int neighbors = 4);

/// Max H¹ (κ = 1) distance between records at matching λ; `matched` counts them.
struct BranchComparison {
  double max_distance = 0.0;
  std::size_t matched = 0;
};

BranchComparison compare_branches(const Branch& a, const Branch& b);

}  // namespace varcont
