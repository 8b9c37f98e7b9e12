#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varcont/radial.hpp"

namespace varcont {

/// SplitMix64 (Steele, Lea, Flood). Every random probe in the library is drawn
/// from one of these, seeded from the run configuration.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// sum_{k=1}^{modes} c_k cos((k - 1/2) pi r / R) with c_k uniform in [-1, 1] / k.
/// Even in r and zero at r = R, so it is smooth on the discrete ball/truncation.
/// The coefficients depend on the generator only, not on the grid.
RadialField random_smooth_field(const GridPtr& grid, SplitMix64& rng, int modes = 6);

/// A·(1 + ρ/(2‖ρ‖∞))·cos(πr/(2R)) with ρ a random smooth field: strictly positive
/// on [0, R[ and vanishing linearly at R.
RadialField random_positive_field(const GridPtr& grid, SplitMix64& rng, double amplitude = 2.0);

/// Hat function of half-width `width` centred at `center`.
RadialField tent_field(const GridPtr& grid, double center, double width);

/// Named reference profiles on [0, R]:
///   "cos_pi"   cos(pi r / R), sign-changing
///   "positive" 1 - (r / R)^2
///   "gaussian" exp(-(2r / R)^2)
/// Throws InvalidArgument for other names.
RadialField reference_profile(const GridPtr& grid, const std::string& name);

std::vector<std::string> reference_profile_names();

}  // namespace varcont
