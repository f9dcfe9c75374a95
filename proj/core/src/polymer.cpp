#include "cex/polymer.hpp"

#include <bit>
#include <cmath>

#include "cex/error.hpp"

namespace cex {

PolymerSystem::PolymerSystem(std::vector<PolymerSupport> supports, std::vector<double> weights)
    : supports_(std::move(supports)), weights_(std::move(weights)) {
  if (supports_.size() != weights_.size()) fail_input("polymer system: weight count mismatch");
  if (supports_.size() > 64) fail_cap("polymer system: at most 64 polymers");
  conflicts_.assign(supports_.size(), 0);
  for (std::size_t i = 0; i < supports_.size(); ++i) {
    supports_[i] = make_support(supports_[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (!compatible(supports_[i], supports_[j])) {
        conflicts_[i] |= std::uint64_t{1} << j;
        conflicts_[j] |= std::uint64_t{1} << i;
      }
    }
    conflicts_[i] |= std::uint64_t{1} << i;
  }
}

PolymerSystem PolymerSystem::all_subsets(int N, const std::map<int, double>& weight_by_size) {
  if (N < 2 || N > 6) fail_cap("all_subsets: N must be in 2..6");
  std::vector<PolymerSupport> supports;
  std::vector<double> weights;
  for (std::uint32_t m = 1; m < (1U << N); ++m) {
    const int size = std::popcount(m);
    if (size < 2) continue;
    PolymerSupport s;
    for (int i = 0; i < N; ++i) {
      if (m & (1U << i)) s.push_back(i + 1);
    }
    auto it = weight_by_size.find(size);
    supports.push_back(s);
    weights.push_back(it == weight_by_size.end() ? 0.0 : it->second);
  }
  return PolymerSystem(std::move(supports), std::move(weights));
}

double PolymerSystem::direct_sum() const {
  // Recursion over polymers in index order, tracking the forbidden set.
  const std::size_t n = size();
  std::function<double(std::size_t, std::uint64_t)> rec = [&](std::size_t i,
                                                              std::uint64_t blocked) -> double {
    if (i == n) return 1.0;
    double without = rec(i + 1, blocked);
    if ((blocked >> i) & 1U) return without;
    return without + weights_[i] * rec(i + 1, blocked | conflicts_[i]);
  };
  return rec(0, 0);
}

MultiIndex PolymerSystem::to_multi_index(const std::vector<int>& multiplicities) const {
  MultiIndex I;
  for (std::size_t i = 0; i < multiplicities.size(); ++i) {
    if (multiplicities[i] > 0) I[supports_[i]] = multiplicities[i];
  }
  return I;
}

void PolymerSystem::for_each_cluster(
    int max_total, const std::function<void(const std::vector<int>&, double)>& visit) const {
  if (max_total < 1) return;
  if (max_total > kConnectedSumCap) fail_cap("cluster enumeration: total multiplicity too large");
  const std::size_t n = size();
  std::vector<int> mult(n, 0);
  std::vector<double> inv_fact(static_cast<std::size_t>(max_total) + 1, 1.0);
  for (int k = 2; k <= max_total; ++k) inv_fact[static_cast<std::size_t>(k)] = inv_fact[static_cast<std::size_t>(k - 1)] / k;

  // Clusters are grown so the support stays connected: a polymer may join
  // only if it conflicts with something already chosen. The first polymer
  // fixes the smallest index, later ones are taken in increasing index order
  // from the frontier of the current support.
  std::vector<std::uint32_t> adj;
  auto emit = [&](std::uint64_t supp) {
    adj.clear();
    std::vector<std::size_t> owner;
    for (std::uint64_t s = supp; s; s &= s - 1) {
      const auto p = static_cast<std::size_t>(std::countr_zero(s));
      for (int c = 0; c < mult[p]; ++c) owner.push_back(p);
    }
    adj.assign(owner.size(), 0);
    for (std::size_t a = 0; a < owner.size(); ++a) {
      for (std::size_t b = a + 1; b < owner.size(); ++b) {
        if (incompatible(owner[a], owner[b])) {
          adj[a] |= 1U << b;
          adj[b] |= 1U << a;
        }
      }
    }
    double coeff = static_cast<double>(signed_connected_count(adj));
    for (std::uint64_t s = supp; s; s &= s - 1) {
      coeff *= inv_fact[static_cast<std::size_t>(mult[static_cast<std::size_t>(std::countr_zero(s))])];
    }
    visit(mult, coeff);
  };

  // Choose a connected support set (as a bitmask) by canonical growth, then
  // distribute the multiplicity budget over its members.
  std::uint64_t current_supp = 0;
  std::vector<std::size_t> members;
  std::function<void(std::size_t, int)> assign = [&](std::size_t idx, int budget) {
    if (idx == members.size()) {
      emit(current_supp);
      return;
    }
    const std::size_t p = members[idx];
    for (int m = 1; m <= budget - static_cast<int>(members.size() - idx - 1); ++m) {
      mult[p] = m;
      assign(idx + 1, budget - m);
    }
    mult[p] = 0;
  };

  // Connected subsets of the conflict graph with minimum element r: branch
  // on the smallest frontier vertex (take it or forbid it), so every subset
  // is reached by exactly one path.
  std::function<void(std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t)> grow =
      [&](std::uint64_t subset, std::uint64_t frontier, std::uint64_t forbidden,
          std::uint64_t above_root) {
        if (frontier == 0 || std::popcount(subset) == max_total) {
          current_supp = subset;
          members.clear();
          for (std::uint64_t s = subset; s; s &= s - 1) {
            members.push_back(static_cast<std::size_t>(std::countr_zero(s)));
          }
          assign(0, max_total);
          return;
        }
        const auto v = static_cast<std::size_t>(std::countr_zero(frontier));
        const std::uint64_t bit = std::uint64_t{1} << v;
        const std::uint64_t taken = subset | bit;
        grow(taken, (frontier | conflicts_[v]) & ~taken & ~forbidden & above_root, forbidden,
             above_root);
        grow(subset, frontier & ~bit, forbidden | bit, above_root);
      };
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint64_t bit = std::uint64_t{1} << r;
    const std::uint64_t above = r + 1 >= 64 ? 0 : ~((std::uint64_t{2} << r) - 1);
    grow(bit, conflicts_[r] & above, 0, above);
  }
}

ClusterSums PolymerSystem::cluster_sums(int max_total) const {
  ClusterSums out;
  for_each_cluster(max_total, [&](const std::vector<int>& mult, double coeff) {
    double term = coeff;
    bool star = true;
    std::size_t edge_sum = 0;
    std::uint64_t labels = 0;
    for (std::size_t i = 0; i < mult.size(); ++i) {
      if (mult[i] == 0) continue;
      term *= std::pow(weights_[i], mult[i]);
      if (mult[i] != 1) star = false;
      edge_sum += supports_[i].size() - 1;
      for (int l : supports_[i]) labels |= std::uint64_t{1} << (l % 64);
    }
    if (star && edge_sum + 1 != static_cast<std::size_t>(std::popcount(labels))) star = false;
    out.total += term;
    if (star) {
      out.star += term;
    } else {
      out.starstar += term;
      out.abs_starstar += std::abs(term);
    }
    ++out.clusters;
  });
  return out;
}

}  // namespace cex
