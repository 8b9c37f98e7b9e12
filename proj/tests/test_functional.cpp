#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "varcont/errors.hpp"
#include "varcont/functional.hpp"
#include "varcont/probes.hpp"

using namespace varcont;

namespace {

GridPtr whole(int n = 2000) { return make_grid(3, 20.0, n, DomainKind::TruncatedWholeSpace); }
GridPtr ball(int n = 400) { return make_grid(3, 1.0, n, DomainKind::Ball); }

const oracle::GroundState& ground_state() {
  static const oracle::GroundState gs = oracle::cubic_ground_state(3, 1.0);
  return gs;
}

RadialField sampled_ground_state(const GridPtr& g) { return RadialField::from_function(g, ground_state()); }

double quartic(const RadialField& u) {
  double s = 0.0;
  const auto w = u.grid().quadrature_weights();
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::pow(u[i], 4);
  return s;
}

}  // namespace

TEST_SUITE("functional") {

TEST_CASE("the zero field is critical with zero energy in every mode") {
  const auto g = whole(200);
  const auto b = ball(100);
  const Problem aut = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
  const Problem wtd =
      Problem::weighted(g, Nonlinearity::pure_power(3.0), Potential::radial([](double r) { return 1 + std::exp(-r); },
                                                                            false, "one_plus_exp"));
  const Problem frc = Problem::forced(b, 3.0, RadialField(b));
  for (const Problem* p : {&aut, &wtd, &frc}) {
    const RadialField z(p->grid());
    CHECK(energy(*p, z, 1.0) == 0.0);
    CHECK(gradient(*p, z, 1.0).sup_norm() == 0.0);
    CHECK(nehari_residual(*p, z, 1.0) == 0.0);
  }
  const auto s = ab_split(aut, RadialField(g));
  CHECK(s.a_part == 0.0);
  CHECK(s.b_part == 0.0);
  CHECK(pohozaev_residual(aut, RadialField(g), 1.0).value == 0.0);
}

TEST_CASE("mode restrictions") {
  const auto g = whole(100);
  CHECK_THROWS_AS(Problem::forced(g, 3.0, RadialField(g)), InvalidArgument);
  const auto b = ball(50);
  CHECK_THROWS_AS(Problem::forced(b, 5.0, RadialField(b)), InvalidArgument);
  CHECK_THROWS_AS(Problem::forced(b, 3.0, RadialField(ball(60))), InvalidArgument);
  const Problem frc = Problem::forced(b, 3.0, RadialField(b));
  CHECK_THROWS_AS(ab_split(frc, RadialField(b)), InvalidArgument);
  CHECK_THROWS_AS(pohozaev_residual(frc, RadialField(b), 1.0), InvalidArgument);
  const Problem wtd = Problem::weighted(g, Nonlinearity::pure_power(3.0), Potential::one());
  CHECK_THROWS_AS(pohozaev_residual(wtd, RadialField(g), 1.0), InvalidArgument);
  CHECK_THROWS_AS(energy_identity_gap(wtd, RadialField(g), 1.0), InvalidArgument);
}

TEST_CASE("energy matches an independent quadrature") {
  const auto b = ball(300);
  SplitMix64 rng(31);
  const auto u = random_smooth_field(b, rng);
  const auto f = random_smooth_field(b, rng);
  const Problem aut = Problem::autonomous(b, Nonlinearity::pure_power(3.0), false);
  const Problem frc = Problem::forced(b, 3.0, f);
  const double grad = dirichlet_form(u, u);
  const double l2 = inner(u, u);
  CHECK(energy(aut, u, 0.7) == doctest::Approx(0.5 * (grad + 0.7 * l2) - 0.25 * quartic(u)).epsilon(1e-13));
  RadialField up(b);
  for (std::size_t i = 0; i < u.size(); ++i) up[i] = std::max(u[i], 0.0);
  CHECK(energy(frc, u, 123.0) == doctest::Approx(0.5 * grad - 0.25 * quartic(up) - inner(f, u)).epsilon(1e-13));
}

TEST_CASE("energy identity and Pohozaev at the shooting ground state") {
  const auto g = whole(2000);
  const Problem p = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
  const auto u = sampled_ground_state(g);
  const double level = energy(p, u, 1.0);
  CHECK(std::abs(level - dirichlet_form(u, u) / 3.0) <= 1e-3 * level);
  CHECK(std::abs(energy_identity_gap(p, u, 1.0)) <= 1e-3 * level);
  CHECK(std::abs(pohozaev_residual(p, u, 1.0).normalized) <= 1e-3);
  // the nodal residual of a sampled exact solution is the O(h²) truncation error
  const auto coarse_g = whole(1000);
  const auto coarse = gradient(Problem::autonomous(coarse_g, Nonlinearity::pure_power(3.0)),
                               sampled_ground_state(coarse_g), 1.0);
  const auto fine = gradient(p, u, 1.0);
  CHECK(coarse.sup_norm() / fine.sup_norm() == doctest::Approx(4.0).epsilon(0.1));
  CHECK(std::sqrt(inner(fine, fine) / inner(u, u)) <= 2e-3);
  CHECK(std::abs(nehari_residual(p, u, 1.0)) <= 1e-3 * norms(u, 1.0).h1_sq);
}

TEST_CASE("Pohozaev residual shrinks under refinement") {
  double prev = 0.0;
  for (int n : {500, 1000, 2000}) {
    const auto g = whole(n);
    const Problem p = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
    const double r = std::abs(pohozaev_residual(p, sampled_ground_state(g), 1.0).normalized);
    if (prev > 0.0) CHECK(r <= 0.5 * prev);
    prev = r;
  }
}

TEST_CASE("Pohozaev residual is nonzero away from critical points") {
  const auto g = whole(400);
  const Problem p = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
  CHECK(std::abs(pohozaev_residual(p, 3.0 * tent_field(g, 0.0, 4.0), 1.0).normalized) > 1e-2);
}

TEST_CASE("property: central differences converge at second order to the pairing") {
  // Without the s⁺ clip the energy is a polynomial in ε, so D(ε) has an exact ε² error
  // term and the extrapolated limit isolates the strong-form consistency gap.
  const auto b = ball(400);
  SplitMix64 rng(2024);
  const Problem p = Problem::autonomous(b, Nonlinearity::pure_power(3.0), false);
  for (int k = 0; k < 10; ++k) {
    const auto u = random_smooth_field(b, rng);
    const auto v = random_smooth_field(b, rng);
    auto d = [&](double e) { return (energy(p, u + e * v, 0.8) - energy(p, u - e * v, 0.8)) / (2 * e); };
    const double d1 = d(0.1), d2 = d(0.05), d4 = d(0.025);
    CHECK((d1 - d2) / (d2 - d4) == doctest::Approx(4.0).epsilon(1e-3));
    const double limit = (4 * d4 - d2) / 3;
    const double pairing = inner(gradient(p, u, 0.8), v);
    const double h = b->spacing();
    CHECK(std::abs(limit - pairing) <= 4 * h * h * std::sqrt(dirichlet_form(u, u) * dirichlet_form(v, v)) + 1e-10);
  }
}

TEST_CASE("property: the consistency gap is second order in h") {
  SplitMix64 seed_rng(99);
  const std::uint64_t seed = seed_rng.next();
  double prev = 0.0;
  for (int n : {100, 200, 400}) {
    const auto b = ball(n);
    SplitMix64 rng(seed);
    const auto u = random_smooth_field(b, rng), v = random_smooth_field(b, rng);
    const Problem p = Problem::autonomous(b, Nonlinearity::pure_power(3.0), false);
    auto d = [&](double e) { return (energy(p, u + e * v, 1.0) - energy(p, u - e * v, 1.0)) / (2 * e); };
    const double limit = (4 * d(0.025) - d(0.05)) / 3;
    const double gap = std::abs(limit - inner(gradient(p, u, 1.0), v));
    if (prev > 0.0) CHECK(prev / gap == doctest::Approx(4.0).epsilon(0.15));
    prev = gap;
  }
}

TEST_CASE("A - lambda B split and exact lambda affinity") {
  const auto g = whole(500);
  const Problem p = Problem::weighted(g, Nonlinearity::pure_power(3.0),
                                      Potential::radial([](double r) { return 1 + std::exp(-r); }, false, "v"));
  SplitMix64 rng(6);
  const auto u = 2.0 * random_smooth_field(g, rng);
  const auto s = ab_split(p, u);
  CHECK(s.b_part == doctest::Approx(-0.5 * inner(u, u)).epsilon(1e-14));
  for (double lambda : {0.1, 1.0, 3.5}) {
    const double e = energy(p, u, lambda);
    CHECK(std::abs(e - (s.a_part - lambda * s.b_part)) <= 1e-12 * (std::abs(e) + std::abs(s.a_part)));
  }
  const double e1 = energy(p, u, 1.0), e2 = energy(p, u, 2.0), e3 = energy(p, u, 3.0);
  CHECK(std::abs((e3 - e2) - (e2 - e1)) <= 1e-12 * std::abs(e1));
  CHECK((e2 - e1) == doctest::Approx(-s.b_part).epsilon(1e-11));
}

TEST_CASE("homogeneity of the split for the pure cubic") {
  const auto g = whole(500);
  const Problem p = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
  SplitMix64 rng(60);
  const auto u = random_positive_field(g, rng, 1.0);
  const auto s1 = ab_split(p, u), s2 = ab_split(p, 2.0 * u);
  CHECK(s2.b_part == doctest::Approx(4.0 * s1.b_part).epsilon(1e-14));
  // A(tu) = t²·½‖∇u‖² − t⁴·¼‖u‖₄⁴
  const double q = 0.5 * dirichlet_form(u, u), r = 0.25 * quartic(u);
  CHECK(s1.a_part == doctest::Approx(q - r).epsilon(1e-12));
  CHECK(s2.a_part == doctest::Approx(4 * q - 16 * r).epsilon(1e-12));
  CHECK(energy(p, 2.0 * u, 1.3) == doctest::Approx(s2.a_part - 1.3 * s2.b_part).epsilon(1e-12));
}

TEST_CASE("transfer identities") {
  const auto g = whole(400);
  const Problem p = Problem::autonomous(g, Nonlinearity::saturating_cubic());
  SplitMix64 rng(14);
  const auto u = random_positive_field(g, rng);
  CHECK(transfer_level(p, u, 0.6, 0.6) == energy(p, u, 0.6));
  CHECK((transfer_gradient(p, u, 0.6, 0.6) - gradient(p, u, 0.6)).sup_norm() == 0.0);
  for (auto [from, to] : {std::pair{0.5, 0.9}, {0.9, 0.3}, {0.2, 0.21}}) {
    const double direct = energy(p, u, to);
    CHECK(std::abs(transfer_level(p, u, from, to) - direct) <= 1e-12 * std::abs(direct));
    const auto dg = gradient(p, u, to);
    CHECK((transfer_gradient(p, u, from, to) - dg).sup_norm() <= 1e-12 * apply_operator(u, to).sup_norm());
  }
}

TEST_CASE("Nehari residual along a ray has exactly one positive root") {
  const auto g = whole(400);
  const Problem p = Problem::autonomous(g, Nonlinearity::pure_power(3.0));
  SplitMix64 rng(3);
  for (int k = 0; k < 5; ++k) {
    const auto u = random_positive_field(g, rng, 1.0);
    // t²·⟨Lu, u⟩ − t⁴·‖u‖₄⁴
    const double a = inner(apply_operator(u, 1.0), u), b = quartic(u);
    const double t_star = std::sqrt(a / b);
    CHECK(std::abs(nehari_residual(p, t_star * u, 1.0)) <= 1e-10 * a * t_star * t_star);
    int changes = 0;
    double prev = nehari_residual(p, 0.01 * t_star * u, 1.0);
    for (int j = 2; j <= 400; ++j) {
      const double cur = nehari_residual(p, (0.01 * j) * t_star * u, 1.0);
      if ((cur > 0) != (prev > 0)) ++changes;
      prev = cur;
    }
    CHECK(changes == 1);
  }
}

TEST_CASE("growth bound constants") {
  // (s³ − δs)/s⁵ is maximal at s² = 2δ with value 1/(4δ)
  const auto cubic = Nonlinearity::pure_power(3.0);
  const double c = growth_bound_check(cubic, 3, 0.1);
  CHECK(c == doctest::Approx(2.5).epsilon(1e-8));
  SplitMix64 rng(1);
  for (int k = 0; k < 10000; ++k) {
    const double s = std::exp(rng.uniform(-8.0, 8.0)) * (rng.uniform() < 0.5 ? -1 : 1);
    CHECK(std::abs(cubic.g(s)) <= 0.1 * std::abs(s) + c * std::pow(std::abs(s), 5) * (1 + 1e-12));
  }
  double prev = growth_bound_check(cubic, 3, 0.05);
  for (double delta : {0.1, 0.5, 1.0, 4.0}) {
    const double cur = growth_bound_check(cubic, 3, delta);
    CHECK(cur < prev);
    prev = cur;
  }

  const auto sat = Nonlinearity::saturating_cubic();
  const auto [s0, expect] = oracle::maximize_log(
      [&](double s) { return (s * s * s / (1 + s * s) - 0.5 * s) / std::pow(s, 5); }, 1e-6, 1e6);
  CHECK(std::isfinite(growth_bound_check(sat, 3, 0.5)));
  CHECK(growth_bound_check(sat, 3, 0.5) == doctest::Approx(expect).epsilon(1e-8));

  CHECK_THROWS_AS(growth_bound_check(cubic, 3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(growth_bound_check(Nonlinearity::pure_power(5.0), 3, 0.1), InvalidArgument);
}

}  // TEST_SUITE
