#include <cmath>

#include "doctest.h"
#include "varcont/continuation.hpp"
#include "varcont/errors.hpp"
#include "varcont/probes.hpp"

using namespace varcont;

namespace {

GridPtr whole(int n = 2000) { return make_grid(3, 20.0, n, DomainKind::TruncatedWholeSpace); }
Problem cubic(const GridPtr& g) { return Problem::autonomous(g, Nonlinearity::pure_power(3.0)); }

const Branch& reference_branch() {
  static const Branch b = sweep(cubic(whole()), lambda_range(0.5, 2.0, 0.05), MountainPassConfig{}, true);
  return b;
}

}  // namespace

TEST_SUITE("continuation") {

TEST_CASE("lambda_range") {
  const auto r = lambda_range(0.5, 2.0, 0.05);
  REQUIRE(r.size() == 31);
  for (std::size_t k = 0; k < r.size(); ++k) CHECK(r[k] == 0.5 + static_cast<double>(k) * 0.05);
  CHECK(lambda_range(1.0, 1.0, 0.1).size() == 1);
  CHECK(lambda_range(2.0, 1.0, 0.1).empty());
  CHECK_THROWS_AS(lambda_range(0.0, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("sweep validation") {
  const Problem p = cubic(whole(100));
  CHECK_THROWS_AS(sweep(p, {1.0, 0.5}, MountainPassConfig{}, true), InvalidArgument);
  CHECK_THROWS_AS(diagnose(Branch{}), InvalidArgument);
}

TEST_CASE("reference cubic branch") {
  const Branch& b = reference_branch();
  CHECK(b.records.size() == 31);
  CHECK(b.gaps.empty());
  CHECK(b.warm_started);
  for (const auto& r : b.records) {
    CHECK(r.converged);
    CHECK(r.positive);
  }
  for (std::size_t i = 1; i < b.records.size(); ++i) CHECK(b.records[i].lambda > b.records[i - 1].lambda);
  const auto d = diagnose(b);
  CHECK(d.monotone);
  CHECK(d.size == 31);
  CHECK(d.level_min == b.records.front().level);
  CHECK(d.level_max == b.records.back().level);
  CHECK(std::isfinite(d.max_h1_sq));
  CHECK(find_record(b, 1.0).has_value());
  CHECK_FALSE(find_record(b, 1.01).has_value());
}

TEST_CASE("saturating branch records a gap at lambda star and beyond") {
  const Problem p = Problem::autonomous(whole(1000), Nonlinearity::saturating_cubic());
  const Branch b = sweep(p, {0.4, 0.6, 1.2}, MountainPassConfig{}, true);
  CHECK(b.records.size() == 2);
  REQUIRE(b.gaps.size() == 1);
  CHECK(b.gaps[0].lambda == 1.2);
  CHECK(b.gaps[0].reason.find("lambda*") != std::string::npos);
  CHECK(diagnose(b).monotone);
}

TEST_CASE("single-point branch") {
  const Branch b = sweep(cubic(whole(500)), {1.0}, MountainPassConfig{}, true);
  REQUIRE(b.records.size() == 1);
  const auto d = diagnose(b);
  CHECK(d.monotone);
  CHECK(d.max_level_jump == 0.0);
  CHECK(d.max_field_jump == 0.0);
  CHECK(d.level_min == d.level_max);
}

TEST_CASE("halving the step roughly halves the jumps") {
  // m_λ ∝ √λ is concave, so the first interval dominates and the ratio sits just above ½
  const Problem p = cubic(whole());
  const Branch fine = sweep(p, lambda_range(0.5, 2.0, 0.025), MountainPassConfig{}, true);
  REQUIRE(fine.gaps.empty());
  const auto coarse = diagnose(reference_branch());
  const auto d = diagnose(fine);
  const double level_ratio = d.max_level_jump / coarse.max_level_jump;
  const double field_ratio = d.max_field_jump / coarse.max_field_jump;
  CHECK(level_ratio == doctest::Approx((std::sqrt(0.525) - std::sqrt(0.5)) / (std::sqrt(0.55) - std::sqrt(0.5)))
                           .epsilon(1e-3));
  CHECK(field_ratio == doctest::Approx(0.5).epsilon(0.05));
  CHECK(d.max_h1_sq == doctest::Approx(coarse.max_h1_sq).epsilon(1e-9));
}

TEST_CASE("scaling law") {
  CHECK(scaling_exponent(3.0, 3) == 0.5);
  CHECK(scaling_exponent(2.0, 3) == 1.5);
  CHECK(scaling_exponent(2.0, 4) == 1.0);

  const Problem p = cubic(whole());
  const Branch b = sweep(p, {0.5, 1.0, 4.0}, MountainPassConfig{}, false);
  REQUIRE(b.records.size() == 3);
  const auto rep = scaling_check(p, b, 1.0);
  CHECK(rep.theta == 0.5);
  for (const auto& e : rep.entries) {
    if (e.lambda == 1.0) CHECK(e.ratio == 1.0);
    if (e.lambda == 4.0) CHECK(e.ratio == doctest::Approx(2.0).epsilon(1e-2));
  }
  CHECK(rep.max_rel_deviation <= 1e-2);

  const Problem quad = Problem::autonomous(whole(), Nonlinearity::pure_power(2.0));
  const Branch bq = sweep(quad, {0.5, 1.0, 1.5, 2.0}, MountainPassConfig{}, true);
  REQUIRE(bq.records.size() == 4);
  const auto rq = scaling_check(quad, bq, 1.0);
  CHECK(rq.theta == 1.5);
  CHECK(rq.max_rel_deviation <= 1e-2);

  const Problem sat = Problem::autonomous(whole(200), Nonlinearity::saturating_cubic());
  CHECK_THROWS_AS(scaling_check(sat, b, 1.0), InvalidArgument);
  CHECK_THROWS_AS(scaling_check(p, b, 2.0), InvalidArgument);
}

TEST_CASE("transfer diagnostics on the reference branch") {
  const Problem p = cubic(whole());
  const Branch& b = reference_branch();
  const auto rep = ps_transfer_check(p, b, 1.0);
  CHECK(rep.all_ok);
  CHECK(rep.entries.size() == b.records.size());
  CHECK(std::isfinite(rep.residual_lipschitz));
  CHECK(rep.residual_lipschitz > 0.0);
  CHECK(std::isfinite(rep.level_lipschitz));
  for (std::size_t i = 0; i < b.records.size(); ++i) {
    if (b.records[i].lambda == 1.0) CHECK(rep.entries[i].residual == b.records[i].grad_residual_l2);
  }
  // residual ≈ |λ_n − λ0|·‖u_n‖₂ away from λ0, hence first-order decay
  CHECK(rep.residual_decay_order == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("transfer diagnostics flag a perturbed record") {
  const Problem p = cubic(whole());
  Branch b = reference_branch();
  SplitMix64 rng(5);
  const auto idx = *find_record(b, 1.2);
  b.records[idx].u += 0.05 * random_smooth_field(p.grid(), rng);
  const auto rep = ps_transfer_check(p, b, 1.0);
  CHECK_FALSE(rep.all_ok);
  CHECK_FALSE(rep.entries[idx].ok);
}

TEST_CASE("branch limit distances decay linearly") {
  const auto rep = branch_limit_check(reference_branch(), 1.0, 4);
  CHECK(rep.entries.size() == 9);
  CHECK(rep.decay_order == doctest::Approx(1.0).epsilon(0.1));
  CHECK(rep.max_distance > 0.0);
  CHECK_THROWS_AS(branch_limit_check(reference_branch(), 1.01, 4), InvalidArgument);
}

TEST_CASE("cold and warm sweeps agree; cold sweeps are thread-count independent") {
  const Problem p = cubic(whole());
  const auto grid = lambda_range(0.5, 2.0, 0.25);
  const Branch warm = sweep(p, grid, MountainPassConfig{}, true);
  const Branch cold1 = sweep(p, grid, MountainPassConfig{}, false, 1);
  const Branch cold4 = sweep(p, grid, MountainPassConfig{}, false, 4);
  CHECK_FALSE(cold1.warm_started);
  const auto cmp = compare_branches(warm, cold1);
  CHECK(cmp.matched == grid.size());
  CHECK(cmp.max_distance <= 1e-3);
  REQUIRE(cold1.records.size() == cold4.records.size());
  for (std::size_t i = 0; i < cold1.records.size(); ++i) {
    CHECK(cold1.records[i].level == cold4.records[i].level);
    CHECK((cold1.records[i].u - cold4.records[i].u).sup_norm() == 0.0);
  }
}

TEST_CASE("weighted branch stays bounded under refinement") {
  const Problem p = Problem::weighted(whole(1000), Nonlinearity::pure_power(3.0),
                                      Potential::radial([](double r) { return 1 + std::exp(-r); }, false, "v"));
  const Branch coarse = sweep(p, lambda_range(0.5, 1.5, 0.25), MountainPassConfig{}, true);
  const Branch fine = sweep(p, lambda_range(0.5, 1.5, 0.125), MountainPassConfig{}, true);
  REQUIRE(coarse.gaps.empty());
  REQUIRE(fine.gaps.empty());
  const auto dc = diagnose(coarse), df = diagnose(fine);
  CHECK(dc.monotone);
  CHECK(df.monotone);
  CHECK(std::isfinite(df.max_h1_sq));
  CHECK(df.max_h1_sq == doctest::Approx(dc.max_h1_sq).epsilon(1e-6));
  for (const auto& r : fine.records) CHECK(r.grad_sq + r.lambda * r.l2_sq <= 4.0 * r.level * (1 + 1e-9));
}

}  // TEST_SUITE
