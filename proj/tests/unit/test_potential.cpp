#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cex/error.hpp"
#include "cex/potential.hpp"

using namespace cex;

TEST_CASE("hard core evaluation and Mayer function") {
  const auto p = PairPotential::hard_core(1.0);
  CHECK(std::isinf(p.eval_r(0.5)));
  CHECK(p.eval_r(1.5) == 0.0);
  CHECK(p.mayer_r(1.0, 0.5) == -1.0);
  CHECK(p.mayer_r(1.0, 1.5) == 0.0);
  const double x[2] = {0.3, 0.4};
  CHECK(p.mayer(1.0, x, 2) == -1.0);
}

TEST_CASE("square well Mayer function") {
  const auto p = PairPotential::square_well(1.0, 0.5, 0.25);
  CHECK(p.mayer_r(2.0, 0.1) == -1.0);
  CHECK(p.mayer_r(2.0, 0.6) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(p.mayer_r(2.0, 1.1) == 0.0);
  CHECK(p.stability() >= 0.0);
}

TEST_CASE("periodized Mayer function uses the minimal image") {
  const auto p = PairPotential::hard_core(1.0);
  const Box box(10.0, 1, BoundaryCondition::periodic);
  const double a = 0.2, b = 9.9, c = 3.0;
  CHECK(periodized_f(p, 1.0, &a, &b, box) == -1.0);
  CHECK(periodized_f(p, 1.0, &a, &c, box) == 0.0);
  // Exhaustive agreement with the plain Mayer function at the wrapped distance.
  for (int i = -50; i < 50; ++i) {
    for (int j = -50; j < 50; ++j) {
      const double qi = 0.1 * i + 0.05, qj = 0.1 * j + 0.05;
      double d = std::remainder(qj - qi, 10.0);
      CHECK(periodized_f(p, 1.0, &qi, &qj, box) == p.mayer_r(1.0, std::abs(d)));
    }
  }
  const Box small(2.0, 1, BoundaryCondition::periodic);
  CHECK_THROWS_AS(periodized_f(p, 1.0, &a, &c, small), Error);
  CHECK_THROWS_AS(periodized_f(p, 1.0, &a, &c, Box(10.0, 1, BoundaryCondition::zero)), Error);
}

TEST_CASE("box geometry") {
  const Box b(4.0, 2, BoundaryCondition::zero);
  CHECK(b.volume() == 16.0);
  const double q[2] = {1.5, -0.5};
  CHECK(b.distance_to_boundary(q) == doctest::Approx(0.5));
  const double out[2] = {2.5, 0.0};
  CHECK(b.distance_to_boundary(out) == 0.0);
  const Box t(4.0, 1, BoundaryCondition::periodic);
  double x = 2.5;
  CHECK(t.wrap(&x));
  CHECK(x == doctest::Approx(-1.5));
  CHECK_THROWS_AS(Box(-1.0, 1, BoundaryCondition::zero), Error);
  CHECK_THROWS_AS(Box(1.0, 4, BoundaryCondition::zero), Error);
}

TEST_CASE("C(beta, R) for hard cores is the ball volume") {
  const auto p = PairPotential::hard_core(1.0);
  CHECK(c_beta(p, 1.0, 1).value == 2.0);
  CHECK(c_beta(p, 1.0, 2).value == doctest::Approx(std::numbers::pi));
  CHECK(c_beta(p, 1.0, 3).value == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  CHECK(c_beta(PairPotential::ideal(), 1.0, 3).value == 0.0);
}

TEST_CASE("C(beta, R) radial quadrature against closed form and cube midpoint") {
  // V(r) = 2 (1 - r) on [0, 1]: in 1D the integral is 1 + e^{-2}.
  const auto p = PairPotential::tabulated({{0.0, 2.0}, {1.0, 0.0}}, 1.0, 1.0);
  CHECK(std::abs(c_beta(p, 1.0, 1).value - (1.0 + std::exp(-2.0))) < 1e-6);
  CHECK(std::abs(c_beta(p, 1.0, 2).value - c_beta_cube_midpoint(p, 1.0, 2, 2000)) < 1e-5);

  const auto well = PairPotential::square_well(1.0, 0.5, 0.25);
  // Hard core 2 * 0.25 plus the well 2 * 0.75 (e^{0.5} - 1).
  CHECK(std::abs(c_beta(well, 1.0, 1).value - (0.5 + 1.5 * (std::exp(0.5) - 1))) < 1e-6);
}

TEST_CASE("tabulated potential interpolates and allows infinite nodes") {
  const auto p = PairPotential::tabulated({{0.0, INFINITY}, {0.5, 1.0}, {1.0, 0.0}},
                                          1.0, 0.0);
  CHECK(std::isinf(p.eval_r(0.25)));
  CHECK(p.eval_r(0.75) == doctest::Approx(0.5));
  CHECK(p.eval_r(2.0) == 0.0);
}

TEST_CASE("stability probe") {
  const auto well = PairPotential::square_well(1.0, 1.0, 0.4, 3.0);
  const auto probe = stability_probe(well, 1, 6, 20000, 3);
  CHECK(probe.pass);
  CHECK(probe.min_energy_per_particle >= -3.0);
  CHECK(stability_probe(PairPotential::hard_core(1.0), 2, 5, 1000, 3).pass);
}

TEST_CASE("potential descriptions parse from key = value text") {
  const auto p = parse_potential("kind = square_well\nR = 1.5\ndepth = 0.5\ncore = 0.5\n");
  CHECK(p.kind() == PotentialKind::square_well);
  CHECK(p.range() == 1.5);
  CHECK(p.depth() == 0.5);
  CHECK(parse_potential("kind = ideal").kind() == PotentialKind::ideal);
  CHECK_THROWS_AS(parse_potential("kind = lennard_jones"), Error);
  const auto table = parse_table_csv("r,V\n0,inf\n0.5,1\n1,0\n");
  REQUIRE(table.size() == 3);
  CHECK(std::isinf(table[0].second));
}

TEST_CASE("total energy counts each pair once") {
  const auto well = PairPotential::square_well(1.0, 1.0);
  CHECK(total_energy(well, {0.0, 0.5, 0.9}, 1) == -3.0);
  const Box box(4.0, 1, BoundaryCondition::periodic);
  CHECK(total_energy(well, {-1.9, 1.9}, 1, &box) == -1.0);
  CHECK(total_energy(well, {-1.9, 1.9}, 1) == 0.0);
}
