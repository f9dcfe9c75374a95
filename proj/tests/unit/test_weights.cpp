#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cex/error.hpp"
#include "cex/weights.hpp"

using namespace cex;

namespace {

WeightRequest rods(int n, double ell, BoundaryCondition bc) {
  return {n, PairPotential::hard_core(1.0), 1.0, Box(ell, 1, bc), {}};
}

}  // namespace

TEST_CASE("two-particle activity of hard rods") {
  // Zero bc: overlap area 10^2 - 9^2 of the square; periodic: 2 * 10.
  CHECK(omega(rods(2, 10, BoundaryCondition::zero)).value == doctest::Approx(-0.19).epsilon(1e-12));
  CHECK(omega(rods(2, 10, BoundaryCondition::periodic)).value == doctest::Approx(-0.2).epsilon(1e-12));
  auto ideal = rods(2, 10, BoundaryCondition::zero);
  ideal.potential = PairPotential::ideal();
  CHECK(omega(ideal).value == 0.0);
}

TEST_CASE("three-particle activity on the torus") {
  // Three chains of weight (2R)^2 and a triangle of area 3R^2 with sign -1.
  CHECK(omega(rods(3, 10, BoundaryCondition::periodic)).value == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("Monte Carlo activity agrees with the exact path") {
  McOptions mc;
  mc.force_mc = true;
  mc.samples = 400'000;
  for (auto bc : {BoundaryCondition::zero, BoundaryCondition::periodic}) {
    for (int n = 2; n <= 4; ++n) {
      const auto exact = omega(rods(n, 10, bc));
      const auto est = omega(rods(n, 10, bc), mc);
      CHECK(est.method == Method::monte_carlo);
      CHECK(est.agrees_with(exact.value, 3.5));
    }
  }
}

TEST_CASE("activity is bounded by the tree estimate") {
  for (auto bc : {BoundaryCondition::zero, BoundaryCondition::periodic}) {
    for (int n = 2; n <= 4; ++n) {
      const auto req = rods(n, 10, bc);
      CHECK(std::abs(omega(req).value) <= activity_bound(n, req.potential, 1.0, req.box, 0.0) * (1 + 1e-12));
    }
  }
  const auto req = rods(2, 10, BoundaryCondition::periodic);
  CHECK(activity_bound(2, req.potential, 1.0, req.box, 0.0) == doctest::Approx(0.2));
  CHECK(activity_bound(2, req.potential, 1.0, req.box, 0.0, true, 0) == doctest::Approx(0.04));
}

TEST_CASE("rooted activities sum back to the plain activity") {
  for (auto bc : {BoundaryCondition::zero, BoundaryCondition::periodic}) {
    for (int n = 2; n <= 3; ++n) {
      double sum = 0.0;
      for (int root = 0; root < n; ++root) {
        for (int eps : {0, 1}) {
          auto req = rods(n, 12, bc);
          req.rooted = RootFlavor{root, eps};
          sum += omega(req).value;
        }
      }
      CHECK(sum == doctest::Approx(omega(rods(n, 12, bc)).value).epsilon(1e-10));
    }
  }
}

TEST_CASE("shifting periodic samples leaves the estimate unchanged") {
  McOptions mc;
  mc.force_mc = true;
  mc.samples = 100'000;
  mc.seed = 9;
  const auto base = omega(rods(3, 10, BoundaryCondition::periodic), mc);
  mc.shift = 3.7;
  const auto shifted = omega(rods(3, 10, BoundaryCondition::periodic), mc);
  CHECK(std::abs(base.value - shifted.value) <= 1e-3 * base.error);
  mc.shift = 1.0;
  CHECK_THROWS_AS(omega(rods(3, 10, BoundaryCondition::zero), mc), Error);
}

TEST_CASE("Monte Carlo is deterministic for a fixed seed and stream count") {
  McOptions mc;
  mc.force_mc = true;
  mc.samples = 50'000;
  mc.seed = 21;
  mc.streams = 4;
  mc.workers = 1;
  const auto a = omega(rods(3, 10, BoundaryCondition::zero), mc);
  mc.workers = 4;
  const auto b = omega(rods(3, 10, BoundaryCondition::zero), mc);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
  REQUIRE(a.seed);
  CHECK(*a.seed == 21);
}

TEST_CASE("activity refuses bad requests") {
  CHECK_THROWS_AS(omega(rods(7, 10, BoundaryCondition::zero)), Error);
  CHECK_THROWS_AS(omega(rods(1, 10, BoundaryCondition::zero)), Error);
  CHECK_THROWS_AS(omega(rods(2, 2, BoundaryCondition::periodic)), Error);
  McOptions none;
  none.force_mc = true;
  none.samples = 0;
  CHECK_THROWS_AS(omega(rods(2, 10, BoundaryCondition::zero), none), Error);
}

TEST_CASE("irreducible coefficients of hard rods follow the Tonks virial series") {
  // beta P = rho / (1 - rho R) gives beta_n = -(n + 1) R^n / n.
  const auto p = PairPotential::hard_core(1.0);
  for (int n = 1; n <= 3; ++n) {
    const auto b = beta_n(n, p, 1.0, 1);
    CHECK(b.method == Method::exact);
    CHECK(b.value == doctest::Approx(-(n + 1.0) / n).epsilon(1e-12));
  }
  CHECK(mayer_integral(p, 1.0, 1).value == -2.0);
  CHECK(mayer_integral(p, 1.0, 2).value == doctest::Approx(-std::numbers::pi));
}

TEST_CASE("Monte Carlo beta_2 for hard disks") {
  // Triangle integral of unit disks: 3 (pi/2)^2 (4/3 - sqrt(3)/pi) from the
  // classical third virial coefficient; beta_2 is minus half of it.
  const auto p = PairPotential::hard_core(1.0);
  McOptions mc;
  mc.samples = 2'000'000;
  const auto b = beta_n(2, p, 1.0, 2, mc);
  const double pi = std::numbers::pi;
  const double want = -0.5 * (pi * pi - 0.75 * std::sqrt(3.0) * pi);
  CHECK(b.method == Method::monte_carlo);
  CHECK(b.agrees_with(want, 4.0));
}

TEST_CASE("Ursell and biconnected sums at fixed configurations") {
  const auto p = PairPotential::hard_core(1.0);
  const double pair[2] = {0.0, 0.5};
  CHECK(ursell(p, 1.0, pair, 2, 1, nullptr) == -1.0);
  CHECK(biconnected_sum(p, 1.0, pair, 2, 1) == -1.0);
  // All three overlapping: every connected graph has product (-1)^{|E|}.
  const double tri[3] = {0.0, 0.3, 0.6};
  CHECK(ursell(p, 1.0, tri, 3, 1, nullptr) == 3.0 - 1.0);
  CHECK(biconnected_sum(p, 1.0, tri, 3, 1) == -1.0);
  // A chain 0 - 0.8 - 1.6: only the path graph survives.
  const double chain[3] = {0.0, 0.8, 1.6};
  CHECK(ursell(p, 1.0, chain, 3, 1, nullptr) == 1.0);
  CHECK(biconnected_sum(p, 1.0, chain, 3, 1) == 0.0);
}

TEST_CASE("root colour splits the box at distance R|V|") {
  const Box box(10.0, 1, BoundaryCondition::zero);
  const double near = 4.5, far = 0.0;
  CHECK(root_colour(box, &near, 1.0, 2, 0) == 1.0);
  CHECK(root_colour(box, &near, 1.0, 2, 1) == 0.0);
  CHECK(root_colour(box, &far, 1.0, 2, 0) == 0.0);
  CHECK(root_colour(box, &far, 1.0, 2, 1) == 1.0);
}

TEST_CASE("tree-graph inequality on random configurations") {
  CHECK(tree_graph_bound_check(4, PairPotential::hard_core(1.0), 1.0, 1, 20000, 1).pass());
  CHECK(tree_graph_bound_check(5, PairPotential::square_well(1.0, 0.5, 0.5, 1.0), 1.0, 2, 20000, 2).pass());
}
