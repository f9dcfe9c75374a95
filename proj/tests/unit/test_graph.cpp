#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"

#include "cex/error.hpp"
#include "cex/graph.hpp"
#include "cex/polymer.hpp"

using namespace cex;

namespace {

// Independent connectivity check: union-find over an explicit edge list.
bool uf_connected(int n, const std::vector<std::pair<int, int>>& edges, int skip = -1) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (auto [a, b] : edges) {
    if (a == skip || b == skip) continue;
    parent[static_cast<std::size_t>(find(a))] = find(b);
  }
  int roots = 0;
  for (int v = 0; v < n; ++v) {
    if (v != skip && find(v) == v) ++roots;
  }
  return roots <= 1;
}

std::vector<std::pair<int, int>> pairs_of(int n) {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) p.emplace_back(i, j);
  }
  return p;
}

struct BruteCounts {
  int connected = 0, biconnected = 0, trees = 0;
};

BruteCounts brute_counts(int n) {
  const auto all = pairs_of(n);
  BruteCounts c;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << all.size()); ++m) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t b = 0; b < all.size(); ++b) {
      if (m >> b & 1) e.push_back(all[b]);
    }
    if (!uf_connected(n, e)) continue;
    ++c.connected;
    if (static_cast<int>(e.size()) == n - 1) ++c.trees;
    bool bi = n >= 2;
    for (int v = 0; v < n && bi; ++v) bi = uf_connected(n, e, v);
    if (bi) ++c.biconnected;
  }
  return c;
}

}  // namespace

TEST_CASE("connected, biconnected and tree counts match brute force") {
  // Frozen from brute_counts(); the test recomputes them as well.
  const std::map<int, std::array<int, 3>> frozen{
      {1, {1, 0, 1}}, {2, {1, 1, 1}}, {3, {4, 1, 3}}, {4, {38, 10, 16}}, {5, {728, 238, 125}}};
  for (const auto& [n, want] : frozen) {
    const auto b = brute_counts(n);
    CHECK(b.connected == want[0]);
    CHECK(b.trees == want[2]);
    CHECK(static_cast<int>(enumerate_connected(n).size()) == want[0]);
    CHECK(static_cast<int>(enumerate_trees(n).size()) == want[2]);
    if (n >= 2) {
      CHECK(b.biconnected == want[1]);
      CHECK(static_cast<int>(enumerate_biconnected(n).size()) == want[1]);
    }
  }
  CHECK(enumerate_biconnected(6).size() == 11368);
}

TEST_CASE("connected plus disconnected covers every edge subset") {
  for (int n = 1; n <= 5; ++n) {
    const auto pairs = n * (n - 1) / 2;
    std::uint64_t disconnected = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs); ++m) {
      if (!is_connected(LabeledGraph(n, m))) ++disconnected;
    }
    CHECK(enumerate_connected(n).size() + disconnected == (std::uint64_t{1} << pairs));
  }
}

TEST_CASE("tree counts are n^(n-2) up to the cap") {
  for (int n = 2; n <= 6; ++n) {
    std::size_t want = 1;
    for (int k = 0; k < n - 2; ++k) want *= static_cast<std::size_t>(n);
    CHECK(enumerate_trees(n).size() == want);
  }
}

TEST_CASE("enumeration order is increasing edge mask") {
  const auto g = enumerate_connected(5);
  CHECK(std::is_sorted(g.begin(), g.end(), [](const auto& a, const auto& b) { return a.mask() < b.mask(); }));
  CHECK(enumerate_biconnected(2).front().dump() == "n:2 edges:1-2");
  CHECK(enumerate_biconnected(3).front().dump() == "n:3 edges:1-2,1-3,2-3");
  CHECK(enumerate_connected(1).front().dump() == "n:1 edges:");
}

TEST_CASE("enumeration refuses beyond the cap") {
  for (auto f : {enumerate_connected, enumerate_biconnected, enumerate_trees}) {
    try {
      f(7);
      FAIL("expected a cap refusal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::cap_exceeded);
      CHECK(std::string(e.what()).find("6") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(enumerate_biconnected(1), Error);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(LabeledGraph::from_edges(3, {{1, 1}}), Error);
  CHECK_THROWS_AS(LabeledGraph::from_edges(3, {{1, 4}}), Error);
  CHECK_THROWS_AS(LabeledGraph::from_edges(3, {{1, 2}, {2, 1}}), Error);
  CHECK_THROWS_AS(LabeledGraph(3, 0b1000), Error);
  const auto g = LabeledGraph::from_edges(4, {{1, 2}, {3, 4}, {2, 3}});
  CHECK(g.edge_count() == 3);
  CHECK(g.dump() == "n:4 edges:1-2,2-3,3-4");
  CHECK(is_tree(g));
  CHECK_FALSE(is_biconnected(g));
}

TEST_CASE("cayley formula matches enumeration per degree sequence") {
  CHECK(cayley_count({1, 1, 1, 3}) == 1);
  CHECK(cayley_count({2, 2, 1, 1}) == 2);
  CHECK(cayley_count({1, 1}) == 1);
  CHECK_THROWS_AS(cayley_count({1, 1, 1}), Error);
  for (int n = 2; n <= 6; ++n) {
    std::map<std::vector<int>, int> seen;
    for (const auto& t : enumerate_trees(n)) {
      std::vector<int> d(static_cast<std::size_t>(n), 0);
      for (auto [a, b] : t.edges()) {
        ++d[static_cast<std::size_t>(a - 1)];
        ++d[static_cast<std::size_t>(b - 1)];
      }
      ++seen[d];
    }
    BigInt total = 0;
    for (const auto& [d, count] : seen) {
      CHECK(cayley_count(d) == count);
      total += cayley_count(d);
    }
    CHECK(total == BigInt(static_cast<int>(enumerate_trees(n).size())));
  }
}

TEST_CASE("gamma counts compositions and satisfies its bound") {
  CHECK(gamma_count(1, 5) == 1);
  CHECK(gamma_count(2, 4) == 3);
  CHECK(gamma_count(3, 5) == 6);
  CHECK(gamma_count(4, 3) == 0);
  for (int m = 1; m <= 12; ++m) {
    for (int k = 1; k <= m; ++k) {
      // Stars and bars: C(m-1, k-1).
      BigInt binom = 1;
      for (int i = 1; i <= k - 1; ++i) binom = binom * (m - i) / i;
      CHECK(gamma_count(k, m) == binom);
      CHECK(gamma_bound_holds(k, m));
    }
  }
}

TEST_CASE("phi truncated") {
  CHECK(phi_truncated({{1, 2}}) == 1);
  CHECK(phi_truncated({{1, 2}, {3, 4}}) == 0);
  CHECK(phi_truncated({{1, 2}, {2, 3}, {1, 3}}) == 2);
  CHECK(phi_truncated({{1, 2}, {1, 2}}) == -1);

  std::mt19937 rng(5);
  std::uniform_int_distribution<int> label(1, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PolymerSupport> list;
    const int k = 2 + trial % 4;
    for (int i = 0; i < k; ++i) {
      const int a = label(rng);
      int b = label(rng);
      while (b == a) b = label(rng);
      list.push_back(make_support({a, b}));
    }
    const auto base = phi_truncated(list);
    std::shuffle(list.begin(), list.end(), rng);
    CHECK(phi_truncated(list) == base);
  }
}

TEST_CASE("cluster coefficients") {
  const PolymerSupport V{1, 2};
  const PolymerSupport W{2, 3};
  for (int n = 1; n <= 5; ++n) {
    CHECK(cluster_coefficient({{V, n}}) == Rational(n % 2 ? 1 : -1, n));
    CHECK(cluster_coefficient({{V, 1}, {W, n}}) == (n % 2 ? -1 : 1));
  }
  CHECK(cluster_coefficient({{V, 1}, {W, 1}}) == -1);
  CHECK(cluster_coefficient({{V, 1}, {{3, 4}, 1}}) == 0);
}

namespace {

// Truncated multivariate series in three weights with rational coefficients.
using Mono = std::array<int, 3>;
using Series = std::map<Mono, Rational>;

Series multiply(const Series& a, const Series& b, int max_degree) {
  Series out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      if (m[0] + m[1] + m[2] > max_degree) continue;
      out[m] += ca * cb;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("c_I agrees with the formal expansion of log Z") {
  // Polymers {1,2}, {2,3}, {3,4}: the first and last are compatible.
  const std::vector<PolymerSupport> poly{{1, 2}, {2, 3}, {3, 4}};
  const int D = 5;
  // Z - 1 = w1 + w2 + w3 + w1 w3.
  Series X{{{1, 0, 0}, 1}, {{0, 1, 0}, 1}, {{0, 0, 1}, 1}, {{1, 0, 1}, 1}};
  Series logz;
  Series power = X;
  for (int k = 1; k <= D; ++k) {
    for (const auto& [m, c] : power) logz[m] += c * Rational(k % 2 ? 1 : -1, k);
    power = multiply(power, X, D);
  }
  int checked = 0;
  for (int a = 0; a <= D; ++a) {
    for (int b = 0; a + b <= D; ++b) {
      for (int c = 0; a + b + c <= D; ++c) {
        if (a + b + c == 0) continue;
        MultiIndex I;
        if (a) I[poly[0]] = a;
        if (b) I[poly[1]] = b;
        if (c) I[poly[2]] = c;
        const auto it = logz.find({a, b, c});
        const Rational want = it == logz.end() ? Rational(0) : it->second;
        CHECK(cluster_coefficient(I) == want);
        ++checked;
      }
    }
  }
  CHECK(checked == 55);
}

TEST_CASE("exp identity on a small synthetic polymer system") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  std::vector<PolymerSupport> supports;
  std::vector<double> weights;
  for (int mask = 0; mask < 16; ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) < 2) continue;
    PolymerSupport s;
    for (int b = 0; b < 4; ++b) {
      if (mask >> b & 1) s.push_back(b + 1);
    }
    supports.push_back(s);
    weights.push_back(u(rng));
  }
  const PolymerSystem sys(supports, weights);
  CHECK(std::abs(sys.direct_sum() - std::exp(sys.cluster_series(8))) < 1e-10);
}

TEST_CASE("A-set membership") {
  CHECK(a_set_member({{1, 2, 3}, {2, 3, 4}}, {0, 1}));
  CHECK_FALSE(a_set_member({{1, 2}, {3, 4}}, {0, 1}));
  CHECK_FALSE(a_set_member({{1, 2}, {2, 3}}, {0, 1}));
  CHECK(a_set_member({{1, 2}, {2, 3}, {1, 3}}, {0, 1, 2}));
  // Every consecutive pair shares only label 1, so distinct labels are impossible.
  CHECK_FALSE(a_set_member({{1, 2}, {1, 3}, {1, 4}}, {0, 1, 2}));
  CHECK_THROWS_AS(a_set_member({{1, 2}}, {0}), Error);
}
