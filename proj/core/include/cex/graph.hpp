#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cex {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Largest vertex count accepted by the edge-subset enumerators.
inline constexpr int kEnumerationCap = 6;
/// Largest vertex count for subset-recursion sums (phi^T, c_I, Ursell).
inline constexpr int kConnectedSumCap = 16;

/// Bit position of the pair {i, j} (1-based labels, i != j) in the
/// lexicographic pair order (1,2),(1,3),...,(1,n),(2,3),...
int pair_index(int n, int i, int j);

/// Graph on labels 1..n. Edges are a bitmask over pair_index.
class LabeledGraph {
 public:
  LabeledGraph() = default;
  LabeledGraph(int n, std::uint64_t mask);

  /// Validates labels, self-loops and duplicates.
  static LabeledGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  std::uint64_t mask() const { return mask_; }
  bool has_edge(int i, int j) const;
  int edge_count() const;
  std::vector<std::pair<int, int>> edges() const;

  /// Vertex adjacency as bitmasks over 0-based vertices.
  std::vector<std::uint32_t> adjacency() const;

  /// `n:<int> edges:<i-j,...>`
  std::string dump() const;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  int n_ = 0;
  std::uint64_t mask_ = 0;
};

bool is_connected(const LabeledGraph& g);
/// Connected, and still connected after deleting any one vertex. Literal
/// reading: the single edge on two vertices qualifies.
bool is_biconnected(const LabeledGraph& g);
bool is_tree(const LabeledGraph& g);

/// Outputs are in increasing edge-mask order. Throws cap_exceeded above
/// kEnumerationCap.
std::vector<LabeledGraph> enumerate_connected(int n);
std::vector<LabeledGraph> enumerate_biconnected(int n);
std::vector<LabeledGraph> enumerate_trees(int n);

std::string dump_graphs(const std::vector<LabeledGraph>& graphs);

/// Sum over connected graphs g on n vertices of prod_{ij in g} w(i, j),
/// computed by the subset recursion
///   u(S) = e(S) - sum_{T < S, min S in T} u(T) e(S \ T),  e(S) = prod (1 + w_ij).
/// `w` is an n x n symmetric matrix (diagonal ignored).
double connected_sum(const std::vector<std::vector<double>>& w);

/// Connected spanning subgraphs of the graph with the given adjacency
/// bitmasks, each counted with sign (-1)^{|E|}. Exact for up to
/// kConnectedSumCap vertices.
std::int64_t signed_connected_count(const std::vector<std::uint32_t>& adjacency);

using PolymerSupport = std::vector<int>;  // sorted, distinct, positive
using MultiIndex = std::map<PolymerSupport, int>;

PolymerSupport make_support(std::vector<int> labels);
bool compatible(const PolymerSupport& a, const PolymerSupport& b);

/// phi^T of an ordered list; 1 for a single entry.
BigInt phi_truncated(const std::vector<PolymerSupport>& supports);

/// c_I = (1/I!) sum over connected spanning subgraphs of G_I of (-1)^{|E|}.
/// Zero when the support graph is disconnected.
Rational cluster_coefficient(const MultiIndex& I);

/// Incompatibility graph on the copies of I (copies listed support by
/// support in map order); copies of one polymer are mutually adjacent.
std::vector<std::uint32_t> multi_index_graph(const MultiIndex& I);

/// Number of labelled trees with the given degree sequence.
BigInt cayley_count(const std::vector<int>& degrees);

/// Ordered compositions of m into k positive parts, by the defining sum.
BigInt gamma_count(int k, int m);
/// Gamma_k(m) <= m^{k-1}/(k-1)!, evaluated exactly.
bool gamma_bound_holds(int k, int m);

/// A-set membership for the entries at `positions` (0-based). k = 2: overlap
/// of at least two labels. k >= 3: distinct labels v_l shared by consecutive
/// entries, cyclically.
bool a_set_member(const std::vector<PolymerSupport>& supports,
                  const std::vector<int>& positions);

}  // namespace cex
