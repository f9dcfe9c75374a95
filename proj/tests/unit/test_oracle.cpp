#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"

#include "cex/error.hpp"
#include "cex/oracle.hpp"

using namespace cex;

namespace {
const auto rods = PairPotential::hard_core(1.0);
constexpr auto zero = BoundaryCondition::zero;
constexpr auto periodic = BoundaryCondition::periodic;
}  // namespace

TEST_CASE("closed-form hard-rod partition functions") {
  CHECK(std::exp(z_exact_hard_rods(2, 10, 1, zero).logZ) == doctest::Approx(40.5));
  CHECK(std::exp(z_exact_hard_rods(3, 10, 1, zero).logZ) == doctest::Approx(512.0 / 6));
  CHECK(std::exp(z_exact_hard_rods(2, 10, 1, periodic).logZ) == doctest::Approx(40.0));
  CHECK(std::exp(z_exact_hard_rods(1, 10, 1, periodic).logZ) == doctest::Approx(10.0));
  CHECK(z_exact_hard_rods(0, 10, 1, zero).logZ == 0.0);
  CHECK(z_exact_hard_rods(12, 10, 1, zero).jammed);
  CHECK(z_exact_hard_rods(10, 10, 1, periodic).jammed);
  CHECK(certify_hard_rod_formulas() < 1e-4);
}

TEST_CASE("quadrature reproduces the closed forms") {
  for (auto bc : {zero, periodic}) {
    for (int N = 2; N <= 4; ++N) {
      const auto q = z_bruteforce(N, Box(10, 1, bc), rods, 1.0, Method::quadrature, 20'000'000, 0);
      const auto e = z_exact_hard_rods(N, 10, 1, bc);
      CHECK(std::abs(std::expm1(q.logZ - e.logZ)) < 1e-4);
    }
  }
}

TEST_CASE("Monte Carlo partition function within 3 sigma") {
  for (auto bc : {zero, periodic}) {
    for (int N : {2, 5}) {
      const auto m = z_bruteforce(N, Box(12, 1, bc), rods, 1.0, Method::monte_carlo, 400'000, 5);
      const auto e = z_exact_hard_rods(N, 12, 1, bc);
      CHECK(std::abs(m.zint() - e.zint()) <= 3 * m.zint_error);
      REQUIRE(m.seed);
    }
  }
}

TEST_CASE("hard disks: pair exclusion area") {
  const Box box(10, 2, periodic);
  const double want = 1 - std::numbers::pi / 100;
  const auto m = z_bruteforce(2, box, rods, 1.0, Method::monte_carlo, 1'000'000, 3);
  CHECK(std::abs(m.zint() - want) <= 3 * m.zint_error);
  const auto q = z_bruteforce(2, box, rods, 1.0, Method::quadrature, 20'000'000, 0);
  CHECK(std::abs(q.zint() - want) <= 3 * q.zint_error + 1e-4);
}

TEST_CASE("log Z grows with the box") {
  double prev = -INFINITY;
  for (double ell : {6.0, 8.0, 12.0, 20.0}) {
    const double z = z_exact_hard_rods(4, ell, 1, zero).logZ;
    CHECK(z > prev);
    prev = z;
  }
}

TEST_CASE("ideal gas and trivial sizes are exact") {
  const auto r = z_bruteforce(5, Box(3, 2, zero), PairPotential::ideal(), 1.0, Method::monte_carlo, 10, 1);
  CHECK(r.method == Method::exact);
  CHECK(r.log_zint == 0.0);
  CHECK_THROWS_AS(z_bruteforce(5, Box(10, 1, zero), rods, 1.0, Method::quadrature, 1000, 0), Error);
  CHECK_THROWS_AS(z_bruteforce(11, Box(30, 1, zero), rods, 1.0, Method::monte_carlo, 1000, 0), Error);
  CHECK_THROWS_AS(z_bruteforce(2, Box(2, 1, periodic), rods, 1.0, Method::monte_carlo, 1000, 0), Error);
}

TEST_CASE("Tonks free energy") {
  CHECK(tonks_beta_f(0.1, 1.0) == doctest::Approx(0.1 * std::log(0.1 / 0.9) - 0.1));
  CHECK_THROWS_AS(tonks_beta_f(1.0, 1.0), Error);
}

TEST_CASE("Gibbs sampler keeps hard rods apart and inside walls") {
  GibbsConfig cfg;
  cfg.N = 8;
  cfg.box = Box(16, 1, zero);
  cfg.potential = rods;
  cfg.sweeps = 2000;
  cfg.burn_in = 200;
  cfg.stride = 5;
  bool ok = true;
  const double acc = gibbs_sample(cfg, [&](int, std::uint64_t, const std::vector<double>& q) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      ok = ok && q[i] > -8 && q[i] <= 8;
      for (std::size_t j = i + 1; j < q.size(); ++j) ok = ok && std::abs(q[i] - q[j]) >= 1.0;
    }
  });
  CHECK(ok);
  CHECK(acc > 0.2);
  CHECK(acc < 0.7);
}

TEST_CASE("Gibbs detailed balance on a coarse-grained state space") {
  // Reversibility makes probability flow between any two sets symmetric.
  GibbsConfig cfg;
  cfg.N = 2;
  cfg.box = Box(10, 1, periodic);
  cfg.potential = rods;
  cfg.width = 2.0;
  cfg.seed = 17;
  MetropolisChain chain(cfg, 0);
  chain.burn_in();
  auto cell = [&](const std::vector<double>& q) {
    auto c = [](double x) { return std::min(19, static_cast<int>((x + 5.0) * 2.0)); };
    return c(q[0]) * 20 + c(q[1]);
  };
  std::map<std::pair<int, int>, long> flow;
  int state = cell(chain.positions());
  for (int s = 0; s < 2'000'000; ++s) {
    chain.step();
    const int next = cell(chain.positions());
    if (next != state) ++flow[{state, next}];
    state = next;
  }
  int tested = 0, outside = 0;
  for (const auto& [key, n_ab] : flow) {
    if (key.first > key.second) continue;
    const auto it = flow.find({key.second, key.first});
    const long n_ba = it == flow.end() ? 0 : it->second;
    if (n_ab + n_ba < 50) continue;
    ++tested;
    if (std::abs(n_ab - n_ba) > 3.5 * std::sqrt(static_cast<double>(n_ab + n_ba))) ++outside;
  }
  CHECK(tested > 100);
  CHECK(outside <= tested / 50 + 1);
}

TEST_CASE("ideal gas marginal is uniform (Kolmogorov-Smirnov)") {
  GibbsConfig cfg;
  cfg.N = 3;
  cfg.box = Box(10, 1, periodic);
  cfg.potential = PairPotential::ideal();
  cfg.sweeps = 50'000;
  cfg.burn_in = 100;
  cfg.stride = 5;
  std::vector<double> xs;
  gibbs_sample(cfg, [&](int, std::uint64_t, const std::vector<double>& q) { xs.push_back(q[0]); });
  REQUIRE(xs.size() == 10'000);
  std::sort(xs.begin(), xs.end());
  double D = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = (xs[i] + 5.0) / 10.0;
    D = std::max({D, std::abs(F - i / n), std::abs(F - (i + 1) / n)});
  }
  // 1% critical value.
  CHECK(D < 1.63 / std::sqrt(n));
}

TEST_CASE("Gibbs runs are reproducible and independent of the worker count") {
  GibbsConfig cfg;
  cfg.N = 4;
  cfg.box = Box(12, 1, periodic);
  cfg.potential = rods;
  cfg.sweeps = 500;
  cfg.burn_in = 50;
  cfg.chains = 3;
  cfg.seed = 99;
  auto run = [&](int workers) {
    cfg.workers = workers;
    std::vector<std::vector<double>> last(3);
    gibbs_sample(cfg, [&](int c, std::uint64_t, const std::vector<double>& q) { last[static_cast<std::size_t>(c)] = q; });
    return last;
  };
  CHECK(run(1) == run(3));
}

TEST_CASE("one-point function integrates to N") {
  for (int N : {2, 10}) {
    GibbsConfig cfg;
    cfg.N = N;
    cfg.box = Box(30, 1, zero);
    cfg.potential = rods;
    cfg.sweeps = 20'000;
    cfg.burn_in = 500;
    cfg.stride = 2;
    cfg.chains = 2;
    const auto t = correlation_estimate(cfg, CorrelationKind::one_point, 30);
    CHECK(t.integral == doctest::Approx(N).epsilon(1e-9));
    CHECK(t.csv().find("r_lo,r_hi,value,stderr") != std::string::npos);
  }
}

TEST_CASE("pair kinds need a torus and a reachable radius") {
  GibbsConfig cfg;
  cfg.N = 2;
  cfg.box = Box(10, 1, zero);
  cfg.potential = rods;
  CHECK_THROWS_AS(correlation_estimate(cfg, CorrelationKind::two_point, 10), Error);
  cfg.box = Box(10, 1, periodic);
  CHECK_THROWS_AS(correlation_estimate(cfg, CorrelationKind::two_point, 10, 6.0), Error);
  CHECK(parse_correlation_kind("truncated-labelled") == CorrelationKind::truncated_labelled);
  CHECK(to_string(CorrelationKind::two_point_labelled) == "two-point-labelled");
  CHECK_THROWS_AS(parse_correlation_kind("three-point"), Error);
}
