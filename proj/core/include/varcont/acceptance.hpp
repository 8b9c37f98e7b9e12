#pragma once

#include <functional>
#include <string>
#include <vector>

#include "varcont/config.hpp"

namespace varcont {

struct CriterionInfo {
  int id = 0;
  std::string title;
};

/// The twelve acceptance criteria, in order.
const std::vector<CriterionInfo>& acceptance_criteria();

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int threads = 1;
  /// When nonempty, the determinism criterion also writes its CSV files here.
  std::string out_dir;
  /// Criterion ids to run; empty runs all.
  std::vector<int> only;
  /// Called after each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

/// Runs the suite on `config`. Exceptions inside a criterion fail that criterion only.
std::vector<CriterionResult> run_acceptance(const RunConfig& config, const AcceptanceOptions& options = {});

/// "[PASS]  3  scaling law ... (1.2 s)  detail"
std::string format_result(const CriterionResult& result);

}  // namespace varcont
