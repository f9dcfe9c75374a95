#include "cex/graph.hpp"

#include <bit>
#include <sstream>

#include "cex/error.hpp"

namespace cex {

namespace {

int pair_count(int n) { return n * (n - 1) / 2; }

void check_cap(int n, int lo, const char* what) {
  if (n < lo) fail_input(std::string(what) + ": n must be >= " + std::to_string(lo));
  if (n > kEnumerationCap) {
    fail_cap(std::string(what) + ": n = " + std::to_string(n) +
             " exceeds the enumeration cap of " + std::to_string(kEnumerationCap));
  }
}

// Connectivity of the vertex subset `keep` under the adjacency masks.
bool connected_within(const std::vector<std::uint32_t>& adj, std::uint32_t keep) {
  if (keep == 0) return true;
  std::uint32_t seen = keep & (~keep + 1);
  std::uint32_t frontier = seen;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) {
      next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
    }
    next &= keep & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == keep;
}

template <typename Pred>
std::vector<LabeledGraph> scan(int n, Pred keep) {
  std::vector<LabeledGraph> out;
  const std::uint64_t total = std::uint64_t{1} << pair_count(n);
  for (std::uint64_t m = 0; m < total; ++m) {
    LabeledGraph g(n, m);
    if (keep(g)) out.push_back(g);
  }
  return out;
}

}  // namespace

int pair_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n || i == j) fail_input("invalid vertex pair");
  // Pairs (a, *) for a < i come first: sum_{a<i} (n - a).
  return (i - 1) * n - (i - 1) * i / 2 + (j - i - 1);
}

LabeledGraph::LabeledGraph(int n, std::uint64_t mask) : n_(n), mask_(mask) {
  if (n < 1 || n > 11) fail_input("graph vertex count must be in 1..11");
  const int pc = pair_count(n);
  if (pc < 64 && (mask >> pc) != 0) fail_input("edge mask has bits beyond n(n-1)/2");
}

LabeledGraph LabeledGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  std::uint64_t mask = 0;
  for (auto [i, j] : edges) {
    if (i < 1 || j < 1 || i > n || j > n) fail_input("edge endpoint outside 1..n");
    if (i == j) fail_input("self-loop");
    const std::uint64_t bit = std::uint64_t{1} << pair_index(n, i, j);
    if (mask & bit) fail_input("duplicate edge");
    mask |= bit;
  }
  return LabeledGraph(n, mask);
}

bool LabeledGraph::has_edge(int i, int j) const {
  return (mask_ >> pair_index(n_, i, j)) & 1U;
}

int LabeledGraph::edge_count() const { return std::popcount(mask_); }

std::vector<std::pair<int, int>> LabeledGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  int k = 0;
  for (int i = 1; i <= n_; ++i) {
    for (int j = i + 1; j <= n_; ++j, ++k) {
      if ((mask_ >> k) & 1U) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<std::uint32_t> LabeledGraph::adjacency() const {
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n_), 0);
  for (auto [i, j] : edges()) {
    adj[static_cast<std::size_t>(i - 1)] |= 1U << (j - 1);
    adj[static_cast<std::size_t>(j - 1)] |= 1U << (i - 1);
  }
  return adj;
}

std::string LabeledGraph::dump() const {
  std::ostringstream os;
  os << "n:" << n_ << " edges:";
  bool first = true;
  for (auto [i, j] : edges()) {
    if (!first) os << ',';
    os << i << '-' << j;
    first = false;
  }
  return os.str();
}

bool is_connected(const LabeledGraph& g) {
  return connected_within(g.adjacency(), (1U << g.n()) - 1);
}

bool is_biconnected(const LabeledGraph& g) {
  if (g.n() < 2) return false;
  const auto adj = g.adjacency();
  const std::uint32_t all = (1U << g.n()) - 1;
  if (!connected_within(adj, all)) return false;
  for (int v = 0; v < g.n(); ++v) {
    if (!connected_within(adj, all & ~(1U << v))) return false;
  }
  return true;
}

bool is_tree(const LabeledGraph& g) {
  return g.edge_count() == g.n() - 1 && is_connected(g);
}

std::vector<LabeledGraph> enumerate_connected(int n) {
  check_cap(n, 1, "enumerate_connected");
  return scan(n, [](const LabeledGraph& g) { return is_connected(g); });
}

std::vector<LabeledGraph> enumerate_biconnected(int n) {
  check_cap(n, 2, "enumerate_biconnected");
  return scan(n, [](const LabeledGraph& g) { return is_biconnected(g); });
}

std::vector<LabeledGraph> enumerate_trees(int n) {
  check_cap(n, 1, "enumerate_trees");
  return scan(n, [](const LabeledGraph& g) { return is_tree(g); });
}

std::string dump_graphs(const std::vector<LabeledGraph>& graphs) {
  std::string out;
  for (const auto& g : graphs) {
    out += g.dump();
    out += '\n';
  }
  return out;
}

double connected_sum(const std::vector<std::vector<double>>& w) {
  const int n = static_cast<int>(w.size());
  if (n < 1) fail_input("connected_sum: empty vertex set");
  if (n > kConnectedSumCap) fail_cap("connected_sum: too many vertices");
  const std::uint32_t full = (1U << n) - 1;
  std::vector<double> e(static_cast<std::size_t>(full) + 1, 1.0);
  std::vector<double> u(static_cast<std::size_t>(full) + 1, 0.0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int v = 31 - std::countl_zero(s);
    const std::uint32_t rest = s & ~(1U << v);
    double f = e[rest];
    for (std::uint32_t r = rest; r; r &= r - 1) {
      f *= 1.0 + w[static_cast<std::size_t>(v)][static_cast<std::size_t>(std::countr_zero(r))];
    }
    e[s] = f;
  }
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t others = s & ~low;
    double acc = e[s];
    for (std::uint32_t r = others; r; r = (r - 1) & others) acc -= u[s & ~r] * e[r];
    u[s] = acc;
  }
  return u[full];
}

std::int64_t signed_connected_count(const std::vector<std::uint32_t>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  if (n < 1) fail_input("signed_connected_count: empty vertex set");
  if (n > kConnectedSumCap) {
    fail_cap("signed_connected_count: " + std::to_string(n) + " vertices exceeds cap " +
             std::to_string(kConnectedSumCap));
  }
  // With every edge weight equal to -1, e(S) is the independent-set indicator.
  const std::uint32_t full = (1U << n) - 1;
  std::vector<std::uint8_t> indep(static_cast<std::size_t>(full) + 1, 1);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int v = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    indep[s] = indep[rest] && (adjacency[static_cast<std::size_t>(v)] & rest) == 0;
  }
  std::vector<std::int64_t> u(static_cast<std::size_t>(full) + 1, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t others = s & ~low;
    std::int64_t acc = indep[s];
    for (std::uint32_t r = others; r; r = (r - 1) & others) {
      if (indep[r]) acc -= u[s & ~r];
    }
    u[s] = acc;
  }
  return u[full];
}

}  // namespace cex
