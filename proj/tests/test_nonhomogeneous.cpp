#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "varcont/errors.hpp"
#include "varcont/nonhomogeneous.hpp"
#include "varcont/probes.hpp"

using namespace varcont;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr double kP = 3.0;
constexpr double kQ = 2.0;

GridPtr ball(int n = 400) { return make_grid(3, 1.0, n, DomainKind::Ball); }

const GeometryConstants& geometry() {
  static const GeometryConstants g = geometry_constants(ball(), kP, kQ, kSeed);
  return g;
}

ForcingTerm profile(const std::string& name, double alpha = 0.0) {
  return ForcingTerm(reference_profile(ball(), name), kQ, alpha);
}

double sup_distance(const RadialField& u, const std::function<double(double)>& f) {
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - f(u.grid().node(i))));
  return d;
}

}  // namespace

TEST_SUITE("nonhomogeneous") {

TEST_CASE("forcing terms are normalized in L^q") {
  for (const auto& name : reference_profile_names()) {
    for (double q : {1.6, 2.0, 4.0}) {
      const ForcingTerm f(reference_profile(ball(), name), q, 0.3);
      CHECK(std::abs(lp_norm(f.profile(), q) - 1.0) <= 1e-10);
      CHECK(f.amplitude() == 0.3);
      CHECK((f.field() - 0.3 * f.profile()).sup_norm() == 0.0);
      CHECK(f.with_amplitude(2.0).amplitude() == 2.0);
    }
  }
  CHECK_THROWS_AS(ForcingTerm(reference_profile(ball(), "cos_pi"), 1.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ForcingTerm(reference_profile(ball(), "cos_pi"), 2.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(ForcingTerm(RadialField(ball()), 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(reference_profile(ball(), "nope"), InvalidArgument);
}

TEST_CASE("embedding constant: positivity, scale invariance and grid stability") {
  const auto probes = sobolev_probes(ball(), kP, kSeed);
  CHECK(probes.size() == 1 + 8 + 50);
  const double c = measure_sobolev_constant(probes, kP, kQ);
  CHECK(c > 0.0);
  CHECK(c == measure_sobolev_constant(ball(), kP, kQ, kSeed));

  // max(‖u‖^{p+1}_{p+1}/‖∇u‖^{p+1}, ‖u‖_{q'}/‖∇u‖) is invariant under u → 2u
  std::vector<RadialField> doubled;
  for (const auto& u : probes) doubled.push_back(2.0 * u);
  CHECK(measure_sobolev_constant(doubled, kP, kQ) == doctest::Approx(c).epsilon(1e-12));

  const double fine = measure_sobolev_constant(ball(800), kP, kQ, kSeed);
  CHECK(std::abs(fine - c) / c < 0.05);

  CHECK_THROWS_AS(measure_sobolev_constant(std::vector<RadialField>{}, kP, kQ), InvalidArgument);
  CHECK_THROWS_AS(measure_sobolev_constant(make_grid(3, 5.0, 100, DomainKind::TruncatedWholeSpace), kP, kQ, kSeed),
                  InvalidArgument);
}

TEST_CASE("geometry constants") {
  const GeometryConstants& g = geometry();
  // closed forms with C = 2·measured
  const double c = 2.0 * g.c_sobolev;
  CHECK(g.c_used == c);
  CHECK(g.a == doctest::Approx(std::pow(1.0 / (4.0 * c), 1.0 / (kP - 1.0))).epsilon(1e-14));
  CHECK(g.b == doctest::Approx(g.a * g.a / 8.0).epsilon(1e-14));
  CHECK(g.beta == doctest::Approx(g.a / (8.0 * c)).epsilon(1e-14));
  // the two inequalities of the construction
  CHECK(0.5 * g.a * g.a - c * std::pow(g.a, kP + 1.0) >= 0.25 * g.a * g.a * (1 - 1e-14));
  CHECK(c * g.beta * g.a <= g.a * g.a / 8.0 * (1 + 1e-14));

  const auto doubled = geometry_from_constant(2.0 * g.c_sobolev, kP);
  CHECK(doubled.a < g.a);
  CHECK(doubled.beta < g.beta);

  // regression values for N = 3, p = 3, q = 2, unit ball, n = 400, seed 20240611
  CHECK(g.c_sobolev == doctest::Approx(0.27751314424203694).epsilon(1e-12));
  CHECK(g.a == doctest::Approx(0.6711401605757341).epsilon(1e-12));
  CHECK(g.b == doctest::Approx(0.05630363939220277).epsilon(1e-12));
  CHECK(g.beta == doctest::Approx(0.15115053433072478).epsilon(1e-12));
}

TEST_CASE("unforced solve equals the Lane-Emden solution") {
  const auto s = solve_forced(ball(), kP, profile("cos_pi"), MountainPassConfig{}, geometry());
  REQUIRE(s.record.converged);
  CHECK(s.record.positive);
  CHECK(s.record.level > 0.0);
  CHECK(s.record.lambda == 0.0);
  CHECK(sup_distance(s.record.u, oracle::ball_solution(3, kP, 1.0)) <= 1e-3 * s.record.u.sup_norm());
  CHECK(s.boundary_slope > 0.0);
}

TEST_CASE("barrier and level bound for amplitudes up to beta") {
  const GeometryConstants& g = geometry();
  for (const char* name : {"cos_pi", "positive", "gaussian"}) {
    for (double frac : {0.0, 0.25, 0.5, 1.0}) {
      const auto f = profile(name, frac * g.beta);
      const auto s = solve_forced(ball(), kP, f, MountainPassConfig{}, g);
      INFO(name << " α = " << f.amplitude());
      REQUIRE(s.record.converged);
      CHECK(s.within_geometry);
      CHECK(s.record.level >= g.b);
      CHECK(s.level_bound_holds);
      CHECK(s.record.level <= s.ray_max + 1e-3 * s.ray_max);
    }
  }
  const auto over = solve_forced(ball(), kP, profile("positive", 2.0 * g.beta), MountainPassConfig{}, g);
  CHECK_FALSE(over.within_geometry);
}

TEST_CASE("ray maximum of a quadratic-minus-quartic ray") {
  // I(t v) = ½t²A − ¼t⁴B − tC for f = α·v: compare against an independent 1-D maximization
  const auto b = ball(200);
  const auto v = reference_profile(b, "positive");
  for (double alpha : {0.0, 0.5, 3.0}) {
    const Problem p = Problem::forced(b, kP, alpha * v);
    const double a = dirichlet_form(v, v);
    double q = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) q += b->quadrature_weights()[i] * std::pow(v[i], 4);
    const double c = alpha * inner(v, v);
    const auto [t, peak] =
        oracle::maximize_log([&](double s) { return 0.5 * s * s * a - 0.25 * s * s * s * s * q - s * c; }, 1e-4, 1e4);
    CHECK(ray_maximum(p, v) == doctest::Approx(peak).epsilon(1e-10));
  }
}

TEST_CASE("PS bound") {
  const GeometryConstants& g = geometry();
  const auto probes = sobolev_probes(ball(), kP, kSeed);
  const auto zero = solve_forced(ball(), kP, profile("cos_pi"), MountainPassConfig{}, g);
  const auto free_bound = ps_bound_check(zero.record, kP, RadialField(ball()), probes);
  CHECK(free_bound.holds);
  CHECK(free_bound.dual_norm == 0.0);
  CHECK(free_bound.rhs - free_bound.lhs > 0.1 * free_bound.lhs);

  const auto f = profile("cos_pi", g.beta);
  const auto s = solve_forced(ball(), kP, f, MountainPassConfig{}, g);
  const auto ok = ps_bound_check(s.record, kP, f.field(), probes);
  CHECK(ok.holds);
  CHECK(ok.dual_norm > 0.0);

  SolutionRecord inflated = s.record;
  inflated.u *= 10.0;
  CHECK_FALSE(ps_bound_check(inflated, kP, f.field(), probes).holds);
}

TEST_CASE("dual norm estimate") {
  const auto b = ball(200);
  const auto probes = sobolev_probes(b, kP, kSeed, 10);
  const auto f = reference_profile(b, "cos_pi");
  const double d = dual_norm_estimate(f, probes);
  CHECK(dual_norm_estimate(2.0 * f, probes) == doctest::Approx(2.0 * d).epsilon(1e-13));
  for (const auto& v : probes) CHECK(std::abs(inner(f, v)) <= d * std::sqrt(dirichlet_form(v, v)) * (1 + 1e-12));
  // the Riesz representer attains the supremum
  const auto w = solve_operator(f, 0.0);
  CHECK(d >= std::abs(inner(f, w)) / std::sqrt(dirichlet_form(w, w)) * (1 - 1e-12));
}

TEST_CASE("positivity threshold") {
  const GeometryConstants& g = geometry();
  const MountainPassConfig cfg;
  const auto sign_changing = positivity_threshold(ball(), kP, profile("cos_pi"), cfg, 128 * g.beta, 1e-3 * g.beta);
  CHECK_FALSE(sign_changing.degenerate);
  CHECK(sign_changing.alpha_hat >= 1e-3 * g.beta);
  CHECK(sign_changing.alpha_fail > sign_changing.alpha_hat);
  CHECK(sign_changing.alpha_fail - sign_changing.alpha_hat <= 1e-3 * g.beta);
  REQUIRE_FALSE(sign_changing.probes.empty());
  CHECK(sign_changing.probes.front().alpha == 0.0);
  CHECK(sign_changing.probes.front().positive);
  for (const auto& pr : sign_changing.probes)
    if (pr.positive) CHECK(pr.min_u > 0.0);

  const auto nonneg = positivity_threshold(ball(), kP, profile("positive"), cfg, 4 * g.beta, 1e-3 * g.beta);
  CHECK(nonneg.degenerate);
  CHECK(nonneg.alpha_hat == nonneg.alpha_max);
  CHECK(std::isnan(nonneg.alpha_fail));
  for (const auto& pr : nonneg.probes) CHECK(pr.positive);

  CHECK_THROWS_AS(positivity_threshold(ball(), kP, profile("cos_pi"), cfg, 0.0, 1e-3), InvalidArgument);
}

TEST_CASE("limit study") {
  const GeometryConstants& g = geometry();
  const std::vector<double> amps{g.beta, g.beta / 2, g.beta / 4, g.beta / 8};
  const auto study = limit_study(ball(), kP, profile("cos_pi"), amps, MountainPassConfig{}, 2);
  REQUIRE(study.rows.size() == 4);
  CHECK(study.distances_decreasing);
  const double u0 = study.base.u.sup_norm();
  CHECK(study.rows.back().sup_dist <= 1e-2 * u0);
  const double base_min = study.base.u.min_interior();
  CHECK(base_min > 0.0);
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    const auto& r = study.rows[i];
    CHECK(r.converged);
    CHECK(r.forcing_norm == doctest::Approx(r.alpha).epsilon(1e-10));
    CHECK(std::isfinite(r.c1_dist));
    if (i > 0) {
      CHECK(std::abs(r.min_u - base_min) <= std::abs(study.rows[i - 1].min_u - base_min));
      // ∫f·u is first order in α
      const double ratio = (r.pairing / r.alpha) / (study.rows[0].pairing / study.rows[0].alpha);
      CHECK(ratio >= 0.5);
      CHECK(ratio <= 2.0);
    }
  }
  CHECK(study.lipschitz > 0.0);

  const auto serial = limit_study(ball(), kP, profile("cos_pi"), amps, MountainPassConfig{}, 1);
  for (std::size_t i = 0; i < amps.size(); ++i) CHECK(serial.rows[i].sup_dist == study.rows[i].sup_dist);

  CHECK_THROWS_AS(limit_study(ball(), kP, profile("cos_pi"), {0.1, 0.2}, MountainPassConfig{}), InvalidArgument);
}

}  // TEST_SUITE
