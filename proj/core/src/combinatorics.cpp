#include <algorithm>
#include <numeric>

#include "cex/error.hpp"
#include "cex/graph.hpp"

namespace cex {

namespace {

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

PolymerSupport make_support(std::vector<int> labels) {
  if (labels.empty()) fail_input("polymer support must be nonempty");
  std::sort(labels.begin(), labels.end());
  if (labels.front() < 1) fail_input("polymer labels must be positive");
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    fail_input("polymer labels must be distinct");
  }
  return labels;
}

bool compatible(const PolymerSupport& a, const PolymerSupport& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

BigInt phi_truncated(const std::vector<PolymerSupport>& supports) {
  const auto n = supports.size();
  if (n == 0) fail_input("phi_truncated: empty list");
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!compatible(supports[i], supports[j])) {
        adj[i] |= 1U << j;
        adj[j] |= 1U << i;
      }
    }
  }
  return BigInt(signed_connected_count(adj));
}

std::vector<std::uint32_t> multi_index_graph(const MultiIndex& I) {
  std::vector<const PolymerSupport*> copies;
  for (const auto& [support, mult] : I) {
    if (mult < 1) fail_input("multi-index multiplicities must be positive");
    if (support.empty()) fail_input("empty polymer support in multi-index");
    for (int k = 0; k < mult; ++k) copies.push_back(&support);
  }
  if (copies.empty()) fail_input("multi-index must have total multiplicity >= 1");
  if (copies.size() > static_cast<std::size_t>(kConnectedSumCap)) {
    fail_cap("multi-index total multiplicity " + std::to_string(copies.size()) +
             " exceeds cap " + std::to_string(kConnectedSumCap));
  }
  const auto n = copies.size();
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (copies[i] == copies[j] || !compatible(*copies[i], *copies[j])) {
        adj[i] |= 1U << j;
        adj[j] |= 1U << i;
      }
    }
  }
  return adj;
}

Rational cluster_coefficient(const MultiIndex& I) {
  const auto adj = multi_index_graph(I);
  BigInt denom = 1;
  for (const auto& [support, mult] : I) denom *= factorial(mult);
  // A disconnected G_I has no connected spanning subgraph, so the count is 0.
  return Rational(BigInt(signed_connected_count(adj)), denom);
}

BigInt cayley_count(const std::vector<int>& degrees) {
  const int m = static_cast<int>(degrees.size());
  if (m < 2) fail_input("cayley_count: need at least two vertices");
  long sum = 0;
  for (int d : degrees) {
    if (d < 1) fail_input("cayley_count: degrees must be positive");
    sum += d;
  }
  if (sum != 2L * (m - 1)) {
    fail_input("cayley_count: degree sum " + std::to_string(sum) + " != 2(m-1) = " +
               std::to_string(2 * (m - 1)));
  }
  BigInt den = 1;
  for (int d : degrees) den *= factorial(d - 1);
  return factorial(m - 2) / den;
}

BigInt gamma_count(int k, int m) {
  if (k < 1) fail_input("gamma_count: k must be >= 1");
  if (m < k) return 0;
  // table[j][s]: compositions of s into j positive parts, summed literally.
  std::vector<std::vector<BigInt>> table(static_cast<std::size_t>(k) + 1,
                                         std::vector<BigInt>(static_cast<std::size_t>(m) + 1, 0));
  table[0][0] = 1;
  for (int j = 1; j <= k; ++j) {
    for (int s = j; s <= m; ++s) {
      BigInt acc = 0;
      for (int d = 1; d <= s - (j - 1); ++d) acc += table[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(s - d)];
      table[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] = acc;
    }
  }
  return table[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
}

bool gamma_bound_holds(int k, int m) {
  BigInt lhs = gamma_count(k, m) * factorial(k - 1);
  BigInt rhs = boost::multiprecision::pow(BigInt(m), static_cast<unsigned>(k - 1));
  return lhs <= rhs;
}

namespace {

bool cyclic_labels(const std::vector<PolymerSupport>& sets, std::size_t l,
                   std::vector<int>& used) {
  const std::size_t k = sets.size();
  if (l == k) return true;
  const auto& a = sets[l];
  const auto& b = sets[(l + 1) % k];
  std::vector<int> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  for (int v : common) {
    if (std::find(used.begin(), used.end(), v) != used.end()) continue;
    used.push_back(v);
    if (cyclic_labels(sets, l + 1, used)) return true;
    used.pop_back();
  }
  return false;
}

}  // namespace

bool a_set_member(const std::vector<PolymerSupport>& supports,
                  const std::vector<int>& positions) {
  const auto k = positions.size();
  if (k < 2) fail_input("a_set_member: need k >= 2 positions");
  std::vector<int> sorted = positions;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail_input("a_set_member: positions must be distinct");
  }
  std::vector<PolymerSupport> chosen;
  for (int p : positions) {
    if (p < 0 || static_cast<std::size_t>(p) >= supports.size()) {
      fail_input("a_set_member: position out of range");
    }
    chosen.push_back(supports[static_cast<std::size_t>(p)]);
  }
  if (k == 2) {
    std::vector<int> common;
    std::set_intersection(chosen[0].begin(), chosen[0].end(), chosen[1].begin(),
                          chosen[1].end(), std::back_inserter(common));
    return common.size() >= 2;
  }
  std::vector<int> used;
  return cyclic_labels(chosen, 0, used);
}

}  // namespace cex
