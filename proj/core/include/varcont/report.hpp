#pragma once

#include <optional>
#include <string>

#include "varcont/continuation.hpp"
#include "varcont/nonhomogeneous.hpp"

namespace varcont {

/// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf".
std::string format_double(double x);

/// lambda,level,grad_residual,pohozaev_residual,nehari_residual,energy_identity_residual,l2_sq,grad_sq,u_at_0,positive
std::string branch_csv(const Branch& branch);
/// r,u
std::string profile_csv(const RadialField& u);
/// alpha,converged,level,min_u,positive, one row per probe in search order
std::string threshold_csv(const ThresholdResult& result);
/// alpha,sup_dist,c1_dist,level,min_u
std::string limit_csv(const LimitStudy& study);

std::string record_summary(const SolutionRecord& record);

std::string sweep_diagnostics_json(const Branch& branch, const BranchDiagnostics& diag,
                                   const std::optional<ScalingReport>& scaling,
                                   const std::optional<TransferReport>& transfer,
                                   const std::optional<LimitReport>& limit);

std::string threshold_report_json(const GeometryConstants& geometry, const ThresholdResult& threshold,
                                  const LimitStudy& limit);

/// Writes bytes verbatim, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace varcont
