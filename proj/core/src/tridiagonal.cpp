#include "varcont/tridiagonal.hpp"

#include <cmath>
#include <utility>

namespace varcont {

bool solve_tridiagonal(Tridiagonal a, std::span<double> rhs) {
  const std::size_t m = a.size();
  if (m == 0) return true;
  if (rhs.size() != m) return false;
  auto& dl = a.lower;
  auto& d = a.diag;
  auto& du = a.upper;
  // Second superdiagonal created by row interchanges.
  std::vector<double> du2(m > 2 ? m - 2 : 0, 0.0);

  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) return false;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      rhs[i + 1] -= fact * rhs[i];
      dl[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double tmp = d[i + 1];
      d[i + 1] = du[i] - fact * tmp;
      if (i + 2 < m) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = tmp;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= fact * rhs[i];
    }
  }
  if (d[m - 1] == 0.0) return false;

  rhs[m - 1] /= d[m - 1];
  if (m > 1) rhs[m - 2] = (rhs[m - 2] - du[m - 2] * rhs[m - 1]) / d[m - 2];
  for (std::size_t k = m > 2 ? m - 2 : 0; k-- > 0;) {
    rhs[k] = (rhs[k] - du[k] * rhs[k + 1] - du2[k] * rhs[k + 2]) / d[k];
  }
  for (double x : rhs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace varcont
