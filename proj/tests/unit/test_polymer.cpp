#include <cmath>

#include "doctest.h"

#include "cex/error.hpp"
#include "cex/oracle.hpp"
#include "cex/polymer.hpp"
#include "cex/weights.hpp"

using namespace cex;

namespace {

// Sum over every subset of polymers that is pairwise disjoint.
double brute_direct_sum(const std::vector<PolymerSupport>& s, const std::vector<double>& w) {
  double total = 0.0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << s.size()); ++m) {
    double prod = 1.0;
    bool ok = true;
    for (std::size_t i = 0; i < s.size() && ok; ++i) {
      if (!(m >> i & 1)) continue;
      prod *= w[i];
      for (std::size_t j = i + 1; j < s.size() && ok; ++j) {
        if (m >> j & 1) ok = compatible(s[i], s[j]);
      }
    }
    if (ok) total += prod;
  }
  return total;
}

}  // namespace

TEST_CASE("all subsets of a small label set") {
  const auto sys = PolymerSystem::all_subsets(4, {{2, 0.1}, {3, 0.2}, {4, 0.3}});
  CHECK(sys.size() == 11);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    CHECK(sys.weight(i) == doctest::Approx(0.1 * (sys.support(i).size() - 1)));
  }
  CHECK(sys.incompatible(0, 0));
}

TEST_CASE("direct sum matches brute-force subset enumeration") {
  const std::vector<PolymerSupport> s{{1, 2}, {2, 3}, {3, 4}, {1, 4}, {1, 2, 3}, {5, 6}};
  const std::vector<double> w{0.3, -0.2, 0.1, 0.05, -0.4, 0.7};
  CHECK(PolymerSystem(s, w).direct_sum() == doctest::Approx(brute_direct_sum(s, w)).epsilon(1e-14));
}

TEST_CASE("hard-rod activities rebuild the interaction partition function") {
  // Set partitions of [N] into polymers reproduce Z^int / |Lambda|^N.
  const double ell = 10.0;
  for (auto bc : {BoundaryCondition::zero, BoundaryCondition::periodic}) {
    const Box box(ell, 1, bc);
    for (int N = 2; N <= 4; ++N) {
      std::map<int, double> w;
      for (int n = 2; n <= N; ++n) {
        w[n] = omega({n, PairPotential::hard_core(1.0), 1.0, box, {}}).value;
      }
      const auto z = z_exact_hard_rods(N, ell, 1.0, bc);
      CHECK(PolymerSystem::all_subsets(N, w).direct_sum() == doctest::Approx(z.zint()).epsilon(1e-10));
    }
  }
}

TEST_CASE("cluster visits carry the exact cluster coefficients") {
  const PolymerSystem sys({{1, 2}, {2, 3}, {3, 4}}, {0.1, 0.1, 0.1});
  int visits = 0;
  sys.for_each_cluster(4, [&](const std::vector<int>& m, double c) {
    ++visits;
    CHECK(c == doctest::Approx(static_cast<double>(cluster_coefficient(sys.to_multi_index(m)))));
  });
  CHECK(visits > 0);
  const auto sums = sys.cluster_sums(6);
  CHECK(sums.star + sums.starstar == doctest::Approx(sums.total));
  CHECK(sums.abs_starstar >= std::abs(sums.starstar));
}

TEST_CASE("cluster series converges to log of the direct sum") {
  const auto sys = PolymerSystem::all_subsets(4, {{2, -0.02}, {3, 0.004}, {4, -0.001}});
  const double want = std::log(sys.direct_sum());
  double prev = INFINITY;
  for (int order : {2, 4, 6, 8}) {
    const double err = std::abs(sys.cluster_series(order) - want);
    CHECK(err <= prev);
    prev = err;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("polymer system validation") {
  CHECK_THROWS_AS(PolymerSystem({{1, 2}}, {0.1, 0.2}), Error);
  CHECK_THROWS_AS(PolymerSystem({{1, 1}}, {0.1}), Error);
}
