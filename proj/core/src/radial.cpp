#include "varcont/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "varcont/errors.hpp"

namespace varcont {

RadialGrid::RadialGrid(int dimension, double radius, int interior_nodes, DomainKind kind)
    : dimension_(dimension),
      radius_(radius),
      n_(interior_nodes),
      h_(radius / (interior_nodes + 1)),
      kind_(kind),
      omega_(2.0 * std::pow(std::numbers::pi, 0.5 * dimension) / std::tgamma(0.5 * dimension)) {
  const std::size_t m = size();
  const double power = dimension_ - 1;
  quad_.resize(m);
  for (std::size_t i = 0; i < m; ++i) quad_[i] = omega_ * h_ * std::pow(node(i), power);
  quad_.front() *= 0.5;
  quad_.back() *= 0.5;
  mid_.resize(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) mid_[i] = omega_ * h_ * std::pow((i + 0.5) * h_, power);
}

bool RadialGrid::operator==(const RadialGrid& other) const noexcept {
  return dimension_ == other.dimension_ && radius_ == other.radius_ && n_ == other.n_ &&
         kind_ == other.kind_;
}

GridPtr make_grid(int dimension, double radius, int interior_nodes, DomainKind kind) {
  if (dimension < 3) throw InvalidArgument("make_grid: dimension must be >= 3 (N = 2 is not supported)");
  if (interior_nodes < 16) throw InvalidArgument("make_grid: need at least 16 interior nodes");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("make_grid: radius must be positive");
  return std::make_shared<const RadialGrid>(dimension, radius, interior_nodes, kind);
}

RadialField::RadialField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw InvalidArgument("RadialField: value count does not match grid");
  values_.back() = 0.0;
}

namespace {
void require_same_grid(const RadialField& a, const RadialField& b) {
  if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid()))
    throw InvalidArgument("RadialField: fields live on different grids");
}
}  // namespace

RadialField& RadialField::operator+=(const RadialField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RadialField& RadialField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

RadialField& RadialField::axpy(double a, const RadialField& x) {
  require_same_grid(*this, x);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
  return *this;
}

double RadialField::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double RadialField::min_interior() const noexcept {
  double m = values_.front();
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) m = std::min(m, values_[i]);
  return m;
}

RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
RadialField operator*(double s, RadialField a) { return a *= s; }

double integrate(const RadialField& w) {
  const auto q = w.grid().quadrature_weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q[i] * w[i];
  return sum;
}

double inner(const RadialField& u, const RadialField& v) {
  require_same_grid(u, v);
  const auto q = u.grid().quadrature_weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q[i] * u[i] * v[i];
  return sum;
}

RadialField apply_operator(const RadialField& u, double lambda) {
  const RadialGrid& g = u.grid();
  const std::size_t last = g.size() - 1;
  const double h = g.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double nm1 = g.dimension() - 1;
  RadialField out(u.grid_ptr());
  out[0] = -2.0 * g.dimension() * (u[1] - u[0]) * inv_h2 + lambda * u[0];
  for (std::size_t i = 1; i < last; ++i) {
    const double r = g.node(i);
    out[i] = -(u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2 - (nm1 / r) * (u[i + 1] - u[i - 1]) / (2.0 * h) +
             lambda * u[i];
  }
  return out;
}

double dirichlet_form(const RadialField& u, const RadialField& v) {
  require_same_grid(u, v);
  const auto mid = u.grid().midpoint_weights();
  const double h = u.grid().spacing();
  double sum = 0.0;
  for (std::size_t i = 0; i < mid.size(); ++i) sum += mid[i] * (u[i + 1] - u[i]) * (v[i + 1] - v[i]);
  return sum / (h * h);
}

Norms norms(const RadialField& u, double lambda) {
  Norms out;
  out.grad_sq = dirichlet_form(u, u);
  out.l2_sq = inner(u, u);
  out.h1_sq = out.grad_sq + lambda * out.l2_sq;
  return out;
}

double lp_norm(const RadialField& u, double p) {
  if (p < 1.0) throw InvalidArgument("lp_norm: p must be >= 1");
  const auto q = u.grid().quadrature_weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q[i] * std::pow(std::abs(u[i]), p);
  return std::pow(sum, 1.0 / p);
}

double h1_norm(const RadialField& u, double kappa) { return std::sqrt(norms(u, kappa).h1_sq); }

Tridiagonal operator_matrix(const RadialGrid& g, double shift) {
  const std::size_t m = g.size() - 1;
  const double h = g.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double nm1 = g.dimension() - 1;
  Tridiagonal a(m);
  a.diag[0] = 2.0 * g.dimension() * inv_h2 + shift;
  a.upper[0] = -2.0 * g.dimension() * inv_h2;
  for (std::size_t i = 1; i < m; ++i) {
    const double c = nm1 / (2.0 * g.node(i) * h);
    a.lower[i - 1] = -inv_h2 + c;
    a.diag[i] = 2.0 * inv_h2 + shift;
    if (i + 1 < m) a.upper[i] = -inv_h2 - c;
  }
  return a;
}

RadialField solve_operator(const RadialField& rhs, double kappa) {
  std::vector<double> x(rhs.values().begin(), rhs.values().end() - 1);
  if (!solve_tridiagonal(operator_matrix(rhs.grid(), kappa), x)) throw Error("solve_operator: singular operator");
  x.push_back(0.0);
  return RadialField(rhs.grid_ptr(), std::move(x));
}

}  // namespace varcont
