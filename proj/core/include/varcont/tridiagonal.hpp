#pragma once

#include <span>
#include <vector>

namespace varcont {

/// General tridiagonal system: lower[i] couples row i+1 to column i,
/// upper[i] couples row i to column i+1.
struct Tridiagonal {
  std::vector<double> lower;  ///< size m-1
  std::vector<double> diag;   ///< size m
  std::vector<double> upper;  ///< size m-1

  explicit Tridiagonal(std::size_t m = 0) : lower(m ? m - 1 : 0), diag(m), upper(m ? m - 1 : 0) {}
  std::size_t size() const noexcept { return diag.size(); }
};

/// Gaussian elimination with partial pivoting (the LAPACK gtsv scheme).
/// Returns false if the matrix is numerically singular; `rhs` then holds garbage.
bool solve_tridiagonal(Tridiagonal a, std::span<double> rhs);

}  // namespace varcont
