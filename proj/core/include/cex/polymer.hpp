#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "cex/graph.hpp"

namespace cex {

/// Sums of c_I w^I over multi-indices up to a total multiplicity, split into
/// the irreducible part (every multiplicity 1 and sum(|V| - 1) + 1 = |A(I)|)
/// and the rest.
struct ClusterSums {
  double total = 0.0;
  double star = 0.0;
  double starstar = 0.0;
  double abs_starstar = 0.0;
  std::uint64_t clusters = 0;
};

/// Polymers are label sets; two polymers are compatible iff disjoint.
class PolymerSystem {
 public:
  PolymerSystem(std::vector<PolymerSupport> supports, std::vector<double> weights);

  /// Every subset of {1..N} with at least two labels, weight by cardinality.
  static PolymerSystem all_subsets(int N, const std::map<int, double>& weight_by_size);

  std::size_t size() const { return supports_.size(); }
  const PolymerSupport& support(std::size_t i) const { return supports_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  bool incompatible(std::size_t i, std::size_t j) const {
    return (conflicts_[i] >> j) & 1U;
  }

  /// Sum over pairwise-compatible collections of the product of weights
  /// (the empty collection contributes 1).
  double direct_sum() const;

  /// Calls `visit(multiplicities, c_I)` for every cluster (connected support)
  /// with total multiplicity <= max_total.
  void for_each_cluster(int max_total,
                        const std::function<void(const std::vector<int>&, double)>& visit) const;

  ClusterSums cluster_sums(int max_total) const;
  /// sum c_I w^I, truncated.
  double cluster_series(int max_total) const { return cluster_sums(max_total).total; }

  MultiIndex to_multi_index(const std::vector<int>& multiplicities) const;

 private:
  std::vector<PolymerSupport> supports_;
  std::vector<double> weights_;
  std::vector<std::uint64_t> conflicts_;
};

}  // namespace cex
