#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "varcont/radial.hpp"

namespace varcont {

struct PowerTerm {
  double coefficient;
  double exponent;  ///< > 1
};

/// g(s) = sum_k a_k |s|^{p_k - 1} s, exponents sorted ascending.
struct PowerSum {
  std::vector<PowerTerm> terms;
};

/// g(s) = c s^3 / (1 + s^2).
struct SaturatingCubic {
  double amplitude = 1.0;
};

/// g(s) = s^p for s >= 0 and 0 for s <= 0.
struct PositivePartPower {
  double exponent;
};

/// A nonlinearity g with its closed-form primitive G and derivative g'.
class Nonlinearity {
 public:
  using Family = std::variant<PowerSum, SaturatingCubic, PositivePartPower>;

  static Nonlinearity power_sum(std::vector<PowerTerm> terms);
  static Nonlinearity pure_power(double exponent, double coefficient = 1.0);
  static Nonlinearity saturating_cubic(double amplitude = 1.0);
  static Nonlinearity positive_part_power(double exponent);

  const Family& family() const noexcept { return family_; }

  double g(double s) const noexcept;
  double primitive(double s) const noexcept;
  double derivative(double s) const noexcept;

  /// The single exponent p if g = a|s|^{p-1}s with a > 0 (or the positive-part power).
  std::optional<double> pure_power_exponent() const noexcept;

  std::string describe() const;

 private:
  explicit Nonlinearity(Family f) : family_(std::move(f)) {}
  Family family_;
};

inline double eval_g(const Nonlinearity& nl, double s) { return nl.g(s); }
inline double eval_G(const Nonlinearity& nl, double s) { return nl.primitive(s); }

enum class AmbrosettiRabinowitz { Holds, Fails, Unknown };

struct HypothesisReport {
  bool h1 = false;
  bool h2 = false;
  double p_used = 0.0;
  bool h3 = false;
  AmbrosettiRabinowitz h4 = AmbrosettiRabinowitz::Unknown;
  double mu = 0.0;  ///< meaningful when h4 == Holds
  bool subcritical = false;
};

/// (N+2)/(N-2).
double critical_exponent(int dimension);

HypothesisReport check_hypotheses(const Nonlinearity& nl, int dimension);

/// sup_{nu > 0} 2 G(nu) / nu^2, possibly +infinity.
struct LambdaStar {
  double value = 0.0;
  bool attained = false;  ///< false for +inf and for suprema reached only as nu -> 0 or infinity
  bool infinite() const noexcept;
};

/// Throws HypothesisViolation when G <= 0 on every sampled nu.
LambdaStar lambda_star(const Nonlinearity& nl);

/// V >= 0 on the radial line. `One` is V ≡ 1.
class Potential {
 public:
  static Potential one();
  static Potential radial(std::function<double(double)> profile, bool decays_at_infinity, std::string name);

  bool is_one() const noexcept { return !profile_; }
  bool decays_at_infinity() const noexcept { return decays_; }
  const std::string& name() const noexcept { return name_; }
  double operator()(double r) const { return profile_ ? profile_(r) : 1.0; }

 private:
  std::function<double(double)> profile_;
  bool decays_ = false;
  std::string name_ = "one";
};

/// Nodal samples of V on nodes 0..n (the Dirichlet node stays 0).
/// Throws NonAdmissiblePotential if a sample is negative or all are zero.
RadialField eval_potential(const Potential& v, const GridPtr& grid);

}  // namespace varcont
