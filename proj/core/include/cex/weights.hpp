#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cex/measurement.hpp"
#include "cex/potential.hpp"

namespace cex {

struct McOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int streams = 1;
  int workers = -1;
  /// Skip the exact path even where it applies.
  bool force_mc = false;
  /// Constant added to every sampled coordinate (then wrapped); periodic only.
  double shift = 0.0;
};

/// Root and colour of a rooted polymer. `root` is a 0-based position in V.
struct RootFlavor {
  int root = 0;
  int epsilon = 1;
};

struct WeightRequest {
  int n = 2;
  PairPotential potential;
  double beta = 1.0;
  Box box;
  std::optional<RootFlavor> rooted;
};

/// Largest alcove count the exact 1D path will visit before falling back to MC.
inline constexpr double kExactAlcoveBudget = 5e7;

/// Polymer activity for a support of cardinality n: the normalized integral
/// over Lambda^n of the connected-graph sum of Mayer products, times
/// F(epsilon)/n for rooted requests.
Measurement omega(const WeightRequest& req, const McOptions& mc = {});

/// Irreducible coefficient beta_n (q_1 = 0, domain [-nR, nR]^{dn}).
Measurement beta_n(int n, const PairPotential& p, double beta, int dim,
                   const McOptions& mc = {});

/// Signed integral of the Mayer function over R^d (equals beta_1).
Measurement mayer_integral(const PairPotential& p, double beta, int dim);

/// Connected-graph sum prod f over C_n at one configuration (flat, n * dim),
/// using minimal-image displacements when `box` is periodic.
double ursell(const PairPotential& p, double beta, const double* q, int n, int dim,
              const Box* box);

/// Biconnected-graph sum over B_n at one configuration (free space).
double biconnected_sum(const PairPotential& p, double beta, const double* q, int n, int dim);

/// F(epsilon) for a root at q: indicator of d(q, Lambda^c) < R|V| (epsilon 0)
/// or >= R|V| (epsilon 1).
double root_colour(const Box& box, const double* q, double range, int size, int epsilon);

struct TreeGraphReport {
  int n = 0;
  std::uint64_t configs = 0;
  double max_ratio = 0.0;
  std::uint64_t violations = 0;
  double stability_factor = 1.0;
  bool pass() const { return violations == 0; }
};

/// |sum_{C_n} prod f| <= e^{2 beta B n} sum_{T_n} prod |f| on random configurations.
TreeGraphReport tree_graph_bound_check(int n, const PairPotential& p, double beta, int dim,
                                       std::uint64_t configs, std::uint64_t seed);

/// e^{(2 beta B + a) n} n^{n-2} C^{n-1} / |Lambda|^{n-1}; times 2dR/l for
/// rooted requests with epsilon = 0.
double activity_bound(int n, const PairPotential& p, double beta, const Box& box, double a,
                      bool rooted = false, int epsilon = 1);

}  // namespace cex
