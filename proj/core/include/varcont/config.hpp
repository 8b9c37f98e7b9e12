#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varcont/errors.hpp"
#include "varcont/functional.hpp"
#include "varcont/solvers.hpp"

namespace varcont {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ProblemSpec {
  int dimension = 3;
  double radius = 20.0;
  int nodes = 2000;
  DomainKind domain = DomainKind::TruncatedWholeSpace;
  Mode mode = Mode::Autonomous;
  /// power_sum | saturating_cubic | positive_part_power
  std::string nonlinearity = "power_sum";
  std::vector<double> coefficients{1.0};
  std::vector<double> exponents{3.0};
  double amplitude = 1.0;  ///< saturating_cubic only
  /// one | one_plus_exp | exp_decay
  std::string potential = "one";
  bool force_positive = true;
};

struct SweepSpec {
  double lambda = 1.0;  ///< single solve
  double lambda_min = 0.5;
  double lambda_max = 2.0;
  double lambda_step = 0.05;
  /// Explicit grid; overrides the range when nonempty.
  std::vector<double> lambdas;
  double lambda0 = 1.0;
  bool warm = true;
  int neighbors = 4;
};

/// The forced problem on a ball of the same dimension as the main problem.
struct ForcedSpec {
  double exponent = 3.0;
  double q = 2.0;
  double radius = 1.0;
  int nodes = 400;
  std::string profile = "cos_pi";
  double amplitude = 0.0;         ///< single solve, absolute
  double alpha_max_factor = 4.0;  ///< threshold search range in units of β
  double resolution_factor = 1e-3;
  std::vector<double> limit_factors{1.0, 0.5, 0.25, 0.125};
  int random_probes = 50;
};

struct VerifySpec {
  std::vector<int> ladder{500, 1000, 2000};
  int gradient_pairs = 50;
};

struct RunConfig {
  ProblemSpec problem;
  MountainPassConfig solver;
  SweepSpec sweep;
  ForcedSpec forced;
  VerifySpec verify;
  std::string output_dir = "out";
  std::uint64_t seed = 20240611;
  int threads = 1;
};

enum class ConfigFormat { Ini, Json };

/// Parses and validates. Throws ConfigError with the offending key.
RunConfig parse_config(const std::string& text, ConfigFormat format = ConfigFormat::Ini);
/// Format chosen by extension: .json is JSON, anything else INI.
RunConfig load_config(const std::string& path);
/// Canonical INI text; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

/// Re-runs every parse-time check (also used after command-line overrides).
void validate_config(const RunConfig& config);

Nonlinearity make_nonlinearity(const ProblemSpec& spec);
Potential make_potential(const std::string& name);
GridPtr make_problem_grid(const RunConfig& config);
GridPtr make_forced_grid(const RunConfig& config);
/// λ-family problem (autonomous or weighted) from the problem section.
Problem make_lambda_problem(const RunConfig& config, const GridPtr& grid);
std::vector<double> sweep_grid(const RunConfig& config);

}  // namespace varcont
