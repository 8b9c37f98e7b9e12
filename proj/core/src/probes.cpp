#include "varcont/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "varcont/errors.hpp"

namespace varcont {

RadialField random_smooth_field(const GridPtr& grid, SplitMix64& rng, int modes) {
  std::vector<double> coeff(static_cast<std::size_t>(modes));
  for (int k = 0; k < modes; ++k) coeff[k] = rng.uniform(-1.0, 1.0) / (k + 1);
  const double R = grid->radius();
  return RadialField::from_function(grid, [&](double r) {
    double s = 0.0;
    for (int k = 0; k < modes; ++k) s += coeff[k] * std::cos((k + 0.5) * std::numbers::pi * r / R);
    return s;
  });
}

RadialField random_positive_field(const GridPtr& grid, SplitMix64& rng, double amplitude) {
  const RadialField rho = random_smooth_field(grid, rng);
  const double rs = rho.sup_norm();
  RadialField u(grid);
  const double R = grid->radius();
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double bump = std::cos(0.5 * std::numbers::pi * grid->node(i) / R);
    u[i] = amplitude * (1.0 + (rs > 0.0 ? 0.5 * rho[i] / rs : 0.0)) * bump;
  }
  return u;
}

RadialField tent_field(const GridPtr& grid, double center, double width) {
  if (!(width > 0.0)) throw InvalidArgument("tent_field: width must be positive");
  return RadialField::from_function(grid, [&](double r) { return std::max(0.0, 1.0 - std::abs(r - center) / width); });
}

RadialField reference_profile(const GridPtr& grid, const std::string& name) {
  const double R = grid->radius();
  if (name == "cos_pi")
    return RadialField::from_function(grid, [R](double r) { return std::cos(std::numbers::pi * r / R); });
  if (name == "positive") return RadialField::from_function(grid, [R](double r) { return 1.0 - (r / R) * (r / R); });
  if (name == "gaussian")
    return RadialField::from_function(grid, [R](double r) { return std::exp(-4.0 * (r / R) * (r / R)); });
  throw InvalidArgument("unknown profile '" + name + "'");
}

std::vector<std::string> reference_profile_names() { return {"cos_pi", "positive", "gaussian"}; }

}  // namespace varcont
