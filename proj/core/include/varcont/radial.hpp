#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "varcont/tridiagonal.hpp"

namespace varcont {

enum class DomainKind { TruncatedWholeSpace, Ball };

/// Uniform radial mesh r_i = i*h, i = 0..n+1, on [0, R] in dimension N.
///
/// Node n+1 sits on r = R and carries the homogeneous Dirichlet condition.
/// For the whole-space mode R is a truncation radius; for the ball mode it is
/// the domain radius. The grid precomputes the trapezoid weights used by
/// integrate() and the midpoint weights used for the Dirichlet form, both
/// including the surface constant omega = 2 pi^{N/2} / Gamma(N/2).
class RadialGrid {
 public:
  RadialGrid(int dimension, double radius, int interior_nodes, DomainKind kind);

  int dimension() const noexcept { return dimension_; }
  double radius() const noexcept { return radius_; }
  int interior_nodes() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) + 2; }
  double spacing() const noexcept { return h_; }
  DomainKind kind() const noexcept { return kind_; }
  double surface_constant() const noexcept { return omega_; }

  double node(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }

  /// omega * trapezoid weight * r_i^{N-1}.
  std::span<const double> quadrature_weights() const noexcept { return quad_; }
  /// omega * h * r_{i+1/2}^{N-1} for cell i = 0..n.
  std::span<const double> midpoint_weights() const noexcept { return mid_; }

  bool operator==(const RadialGrid& other) const noexcept;

 private:
  int dimension_;
  double radius_;
  int n_;
  double h_;
  DomainKind kind_;
  double omega_;
  std::vector<double> quad_;
  std::vector<double> mid_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Validating factory. Rejects N < 3, n < 16 and R <= 0.
GridPtr make_grid(int dimension, double radius, int interior_nodes, DomainKind kind);

/// Nodal values of a radial function. values[n+1] is always zero.
class RadialField {
 public:
  RadialField() = default;
  explicit RadialField(GridPtr grid);
  /// Takes ownership of `values` (size n+2); the Dirichlet node is zeroed.
  RadialField(GridPtr grid, std::vector<double> values);

  template <class F>
  static RadialField from_function(GridPtr grid, F&& f) {
    RadialField out(grid);
    for (std::size_t i = 0; i + 1 < grid->size(); ++i) out.values_[i] = f(grid->node(i));
    return out;
  }

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  /// Write access; writing the Dirichlet node is the caller's bug.
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool empty() const noexcept { return values_.empty(); }

  RadialField& operator+=(const RadialField& other);
  RadialField& operator-=(const RadialField& other);
  RadialField& operator*=(double s);
  /// this += a * x
  RadialField& axpy(double a, const RadialField& x);

  double sup_norm() const noexcept;
  double min_interior() const noexcept;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);
RadialField operator*(double s, RadialField a);

/// omega * int_0^R w(r) r^{N-1} dr by the composite trapezoid rule.
double integrate(const RadialField& w);
/// integrate(u * v) without materializing the product.
double inner(const RadialField& u, const RadialField& v);

/// Discrete strong form (-Delta_h u)_i + lambda u_i; node n+1 is set to zero.
RadialField apply_operator(const RadialField& u, double lambda);

struct Norms {
  double grad_sq = 0.0;
  double l2_sq = 0.0;
  double h1_sq = 0.0;  ///< grad_sq + lambda * l2_sq
};

Norms norms(const RadialField& u, double lambda);

/// omega * sum_i h r_{i+1/2}^{N-1} (u_{i+1}-u_i)(v_{i+1}-v_i) / h^2.
double dirichlet_form(const RadialField& u, const RadialField& v);

/// (integrate(|u|^p))^{1/p}, p >= 1.
double lp_norm(const RadialField& u, double p);

/// sqrt(grad_sq + kappa * l2_sq) of u.
double h1_norm(const RadialField& u, double kappa);

/// Matrix of (-Delta_h + shift) acting on nodes 0..n (node n+1 eliminated).
Tridiagonal operator_matrix(const RadialGrid& grid, double shift);

/// Solves (-Delta_h + kappa) x = rhs on nodes 0..n with x_{n+1} = 0.
RadialField solve_operator(const RadialField& rhs, double kappa);

}  // namespace varcont
