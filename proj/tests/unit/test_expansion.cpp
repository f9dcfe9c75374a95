#include <cmath>

#include "doctest.h"

#include "cex/error.hpp"
#include "cex/expansion.hpp"
#include "cex/oracle.hpp"

using namespace cex;

namespace {
const auto rods = PairPotential::hard_core(1.0);
}

TEST_CASE("KP report for hard rods") {
  const auto r = kp_check(rods, 1.0, 0.05, 1.0);
  CHECK(r.C == 2.0);
  CHECK(r.delta_prime == doctest::Approx(0.1 * std::exp(1.0)));
  CHECK(r.delta == doctest::Approx(0.1 * std::exp(2.0)));
  CHECK(r.pass);
  CHECK_FALSE(r.condition_met);
  CHECK_FALSE(kp_check(rods, 1.0, 0.5, 1.0).pass);
  CHECK(kp_check(PairPotential::ideal(), 1.0, 10.0, 1.0).condition_met);
  // Small enough density meets the full condition.
  CHECK(kp_check(rods, 1.0, 1e-3, 0.1).condition_met);
  CHECK_THROWS_AS(kp_check(rods, 1.0, 0.05, 0.0), Error);
}

TEST_CASE("KP pass whenever rho C e^{2 beta B + 1 + a} < 1") {
  const auto well = PairPotential::square_well(1.0, 0.5, 0.5, 1.0);
  for (double a : {0.1, 0.5, 1.0}) {
    for (double rho : {1e-3, 1e-2, 3e-2}) {
      const double C = c_beta(well, 1.0, 1).value;
      if (rho * C * std::exp(2.0 + 1.0 + a) < 1.0) CHECK(kp_check(well, 1.0, rho, a).pass);
    }
  }
}

TEST_CASE("free-energy series against the Tonks closed form") {
  const auto s = free_energy_series(0.1, 1.0, rods, 3, 1);
  REQUIRE(s.orders.size() == 3);
  CHECK(s.orders[0].term == doctest::Approx(0.01));
  CHECK(s.orders[1].term == doctest::Approx(0.0005));
  CHECK(s.orders[2].term == doctest::Approx(1e-4 / 3));
  // Remaining tail sum_{n>3} rho (rho R)^n / n is about 2.5e-6.
  CHECK(std::abs(s.value - tonks_beta_f(0.1, 1.0)) < 3e-6);
  CHECK(s.tail_bound > 0.0);
  const auto ideal = free_energy_series(0.1, 1.0, PairPotential::ideal(), 3, 1);
  CHECK(ideal.value == doctest::Approx(0.1 * (std::log(0.1) - 1)));
  CHECK(ideal.tail_bound == 0.0);
}

TEST_CASE("finite-volume factors") {
  CHECK(p_factor(100, 1000.0, 1) == doctest::Approx(0.099));
  CHECK(p_factor(100, 1000.0, 2) == doctest::Approx(99.0 * 98.0 / 1e6));
  CHECK(p_factor(3, 10.0, 3) == 0.0);
  const auto rep = finite_volume_terms(4, Box(20.0, 1, BoundaryCondition::periodic), 1.0, rods, 3);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].F == doctest::Approx(-0.15));
  CHECK(rep.rows[1].F == doctest::Approx(-0.0075));
  CHECK(rep.rows[2].F == doctest::Approx(-2.5e-4));
  CHECK(rep.rows[2].tail_bound == 0.0);
  CHECK(rep.interaction_density == doctest::Approx(0.2 * -0.15775));
  CHECK(rep.csv().rfind("n,P,Bterm,F,tail_bound\n", 0) == 0);
  const auto ideal = finite_volume_terms(4, Box(20.0, 1, BoundaryCondition::periodic), 1.0,
                                         PairPotential::ideal(), 3);
  CHECK(ideal.interaction_density == 0.0);
}

TEST_CASE("Stirling correction matches log(|Lambda|^N / N!) against the ideal density") {
  for (int N : {10, 100, 1000}) {
    const double vol = 10.0 * N;
    const double rho = N / vol;
    const double gap = std::abs(log_ideal_partition(N, vol) / vol + rho * (std::log(rho) - 1));
    CHECK(std::abs(gap - stirling_correction(N, vol)) < 1.0 / (N * N * N) / vol);
  }
}

TEST_CASE("product deviation stays under its envelope") {
  for (int N : {16, 100}) {
    for (int n = 1; n * n <= N; ++n) CHECK(product_deviation(N, n) <= product_envelope(N, n));
  }
}

TEST_CASE("C(rho) series") {
  int terms = 0;
  const double c = c_of_rho(0.05, 1.0, rods, 1.0, 1, &terms);
  CHECK(std::isfinite(c));
  CHECK(c > 0.0);
  CHECK(terms > 1);
  CHECK(std::isinf(c_of_rho(0.5, 1.0, rods, 1.0, 1)));
  CHECK(c_of_rho(0.05, 1.0, PairPotential::ideal(), 1.0, 1) == 0.0);
}

TEST_CASE("boundary split bound scales like 1/l") {
  const auto a = boundary_split_bound(20, Box(200.0, 1, BoundaryCondition::zero), 1.0, rods, 0.1);
  const auto b = boundary_split_bound(40, Box(400.0, 1, BoundaryCondition::zero), 1.0, rods, 0.1);
  REQUIRE(a.converged);
  CHECK(a.S0_bound * 200 == doctest::Approx(b.S0_bound * 400));
  CHECK(std::isfinite(a.S1_starstar_bound));
  // 2ae >= 1 leaves the chain series divergent.
  CHECK(std::isinf(boundary_split_bound(20, Box(200.0, 1, BoundaryCondition::zero), 1.0, rods, 1.0)
                       .S1_starstar_bound));
}

TEST_CASE("rooted split is a partition of unity") {
  CHECK(rooted_split_partition_identity(Box(10.0, 1, BoundaryCondition::zero), 1.0, {1, 2, 3, 5}, 2000, 4));
  CHECK(rooted_split_partition_identity(Box(6.0, 2, BoundaryCondition::zero), 0.5, {2, 4}, 2000, 4));
}

TEST_CASE("B* equals beta_n on the torus") {
  const Box box(12.0, 1, BoundaryCondition::periodic);
  for (int n = 1; n <= 3; ++n) {
    const auto b = b_star_direct(n, box, 1.0, rods);
    CHECK(b.value == doctest::Approx(beta_n(n, rods, 1.0, 1).value).epsilon(1e-9));
  }
  // With walls the boundary lowers the overlap volume.
  const auto zero = b_star_direct(1, Box(12.0, 1, BoundaryCondition::zero), 1.0, rods);
  CHECK(std::abs(zero.value) < 2.0);
}
