#pragma once
// Reference computations that share no code with the library. Every frozen
// number in the tests is either a closed form or comes out of one of these.

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

inline double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }
inline double ball_volume(int n, double r) { return sphere_area(n) * std::pow(r, n) / n; }

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 50) {
  const auto simpson = [&](double l, double r, double fl, double fm, double fr) {
    return (r - l) / 6.0 * (fl + 4.0 * fm + fr);
  };
  const std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, double eps, int d) {
        const double m = 0.5 * (l + r);
        const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(l, m, fl, flm, fm), right = simpson(m, r, fm, frm, fr);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(l, m, fl, flm, fm, left, 0.5 * eps, d - 1) + rec(m, r, fm, frm, fr, right, 0.5 * eps, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

/// Fine composite Simpson of 4π r² e^{−r²} on [0, R].
inline double gaussian_mass_3d(double radius, int panels = 200000) {
  const double h = radius / panels;
  double s = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double r = i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * r * r * std::exp(-r * r);
  }
  return 4.0 * std::numbers::pi * s * h / 3.0;
}

/// Dense golden-section maximization of f on a log grid of [lo, hi].
inline std::pair<double, double> maximize_log(const std::function<double(double)>& f, double lo, double hi,
                                              int samples = 4000) {
  double best_x = lo, best_f = f(lo);
  const double step = std::log(hi / lo) / samples;
  for (int i = 1; i <= samples; ++i) {
    const double x = lo * std::exp(i * step);
    const double v = f(x);
    if (v > best_f) best_f = v, best_x = x;
  }
  double a = best_x * std::exp(-step), b = best_x * std::exp(step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) > f(d)) b = d; else a = c;
  }
  const double x = 0.5 * (a + b);
  return {x, std::max(best_f, f(x))};
}

/// Cubic Hermite interpolation of samples (u, u') at spacing dr. Linear interpolation
/// leaves O(dr²) kinks that a second difference on a mesh of width h inflates by 1/h².
inline double hermite(const std::vector<double>& u, const std::vector<double>& v, double dr, double x) {
  const double k = x / dr;
  const auto i = static_cast<std::size_t>(k);
  if (i + 1 >= u.size()) return 0.0;
  const double t = k - static_cast<double>(i), t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u[i] + (t3 - 2 * t2 + t) * dr * v[i] + (-2 * t3 + 3 * t2) * u[i + 1] +
         (t3 - t2) * dr * v[i + 1];
}

/// RK4 state for a radial ODE u'' + ((N−1)/r)u' = F(u).
struct RadialShot {
  std::vector<double> r, u, v;
  bool crossed = false;  ///< u went below zero
  bool rebound = false;  ///< u' became positive while u > 0
};

inline RadialShot shoot(int n, double u0, double r_end, double dr, const std::function<double(double)>& rhs,
                        bool stop_on_event) {
  // series start u = u0 + F(u0) r²/(2N) avoids the singular coefficient at 0
  RadialShot s;
  double r = dr;
  double u = u0 + rhs(u0) * dr * dr / (2.0 * n);
  double v = rhs(u0) * dr / n;
  s.r.push_back(0.0);
  s.u.push_back(u0);
  s.v.push_back(0.0);
  auto f = [&](double rr, double uu, double vv) { return std::pair{vv, rhs(uu) - (n - 1) / rr * vv}; };
  while (r < r_end) {
    s.r.push_back(r);
    s.u.push_back(u);
    s.v.push_back(v);
    if (u < 0.0) s.crossed = true;
    if (v > 0.0 && u > 0.0) s.rebound = true;
    if (stop_on_event && (s.crossed || s.rebound)) break;
    const auto [k1u, k1v] = f(r, u, v);
    const auto [k2u, k2v] = f(r + dr / 2, u + dr / 2 * k1u, v + dr / 2 * k1v);
    const auto [k3u, k3v] = f(r + dr / 2, u + dr / 2 * k2u, v + dr / 2 * k2v);
    const auto [k4u, k4v] = f(r + dr, u + dr * k3u, v + dr * k3v);
    u += dr / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += dr / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    r += dr;
  }
  return s;
}

/// Ground state of −Δu + λu = u³ in R^N: bisection on u(0) between crossing and rebound shots.
struct GroundState {
  double height = 0.0;
  std::vector<double> r, u, v;
  double dr = 0.0;

  /// Zero past the last reliable sample.
  double operator()(double x) const { return hermite(u, v, dr, x); }
};

inline GroundState cubic_ground_state(int n, double lambda, double dr = 1e-3) {
  const auto rhs = [lambda](double u) { return lambda * u - u * u * u; };
  double lo = std::sqrt(lambda), hi = 20.0 * std::sqrt(lambda);  // lo rebounds, hi crosses
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const RadialShot s = shoot(n, mid, 60.0 / std::sqrt(lambda), dr, rhs, true);
    (s.crossed ? hi : lo) = mid;
  }
  GroundState g;
  g.height = 0.5 * (lo + hi);
  g.dr = dr;
  // keep the shot until it leaves the ground-state manifold, then cut off
  const RadialShot s = shoot(n, g.height, 60.0 / std::sqrt(lambda), dr, rhs, false);
  double umin = s.u[0];
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    if (s.u[i] < 0.0 || s.u[i] > umin) break;
    umin = s.u[i];
    g.r.push_back(s.r[i]);
    g.u.push_back(s.u[i]);
    g.v.push_back(s.v[i]);
  }
  return g;
}

/// Lane–Emden: w'' + ((N−1)/r)w' + w^p = 0, w(0) = 1. Returns (first zero ξ, w sampled at dr).
struct LaneEmden {
  double xi = 0.0;
  std::vector<double> w, dw;
  double dr = 0.0;
};

inline LaneEmden lane_emden(int n, double p, double dr = 1e-4) {
  const auto rhs = [p](double w) { return -std::pow(std::max(w, 0.0), p); };
  const RadialShot s = shoot(n, 1.0, 50.0, dr, rhs, false);
  LaneEmden le;
  le.dr = dr;
  for (std::size_t i = 1; i < s.u.size(); ++i) {
    if (s.u[i] <= 0.0) {
      le.xi = s.r[i - 1] + dr * s.u[i - 1] / (s.u[i - 1] - s.u[i]);
      break;
    }
  }
  le.w.assign(s.u.begin(), s.u.end());
  le.dw.assign(s.v.begin(), s.v.end());
  return le;
}

/// Positive solution of −Δu = u^p on the ball of radius R, u = 0 on the boundary:
/// u(r) = (ξ/R)^{2/(p−1)} w(ξ r / R).
inline std::function<double(double)> ball_solution(int n, double p, double radius) {
  const LaneEmden le = lane_emden(n, p);
  const double scale = std::pow(le.xi / radius, 2.0 / (p - 1.0));
  return [le, scale, radius](double r) {
    if (r >= radius) return 0.0;
    return scale * std::max(0.0, hermite(le.w, le.dw, le.dr, le.xi * r / radius));
  };
}

/// Gaussian elimination without structure, for cross-checking banded solvers.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t m = b.size();
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < m; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < m; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < m; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(m);
  for (std::size_t k = m; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < m; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

}  // namespace oracle
