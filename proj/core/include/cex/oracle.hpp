#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cex/measurement.hpp"
#include "cex/potential.hpp"
#include "cex/random.hpp"

namespace cex {

/// log Z = log(|Lambda|^N / N!) + log Z^int.
struct PartitionResult {
  double logZ = 0.0;
  double log_ideal = 0.0;
  double log_zint = 0.0;
  /// Standard error of Z^int (not of its log).
  double zint_error = 0.0;
  Method method = Method::exact;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 0;
  bool jammed = false;
  /// Budget ran out before the requested accuracy.
  bool flagged = false;

  double zint() const { return std::exp(log_zint); }
};

/// Closed forms for 1D hard rods: (l - (N-1)R)^N / N! (zero bc) and
/// l (l - NR)^{N-1} / N! (periodic). The first call cross-checks both against
/// grid quadrature at N = 2, 3 and throws if they disagree.
PartitionResult z_exact_hard_rods(int N, double ell, double R, BoundaryCondition bc);

/// Runs the self-check explicitly; returns the worst relative deviation.
double certify_hard_rod_formulas();

/// Z^int by tensor-grid midpoint quadrature (at most 60 points per axis,
/// Richardson-combined with the half grid) or uniform Monte Carlo.
PartitionResult z_bruteforce(int N, const Box& box, const PairPotential& p, double beta,
                             Method method, std::uint64_t budget, std::uint64_t seed);

/// Midpoint rule with m points per axis on Lambda^N. A pair sitting exactly on
/// a potential discontinuity gets the mean of the one-sided Boltzmann factors.
double zint_midpoint(int N, const Box& box, const PairPotential& p, double beta, int m);

/// beta f for 1D hard rods: rho log(rho / (1 - rho R)) - rho.
double tonks_beta_f(double rho, double R);

struct GibbsConfig {
  int N = 2;
  Box box;
  PairPotential potential;
  double beta = 1.0;
  std::uint64_t sweeps = 10000;
  std::uint64_t burn_in = 1000;
  /// Sweeps between snapshots; 0 selects 10 N.
  std::uint64_t stride = 0;
  std::uint64_t seed = 1;
  /// Edge length of the displacement cube; 0 tunes it during burn-in towards
  /// 40% acceptance.
  double width = 0.0;
  int chains = 1;
  int workers = -1;
};

/// Single-particle Metropolis chain. One sweep is N attempted moves of
/// uniformly chosen particles.
class MetropolisChain {
 public:
  MetropolisChain(const GibbsConfig& cfg, int chain_index);

  /// One attempted move; returns true when accepted.
  bool step();
  void sweep();
  /// Burn-in with width tuning (when configured).
  void burn_in();

  const std::vector<double>& positions() const { return q_; }
  double width() const { return width_; }
  double acceptance() const {
    return attempts_ ? static_cast<double>(accepted_) / static_cast<double>(attempts_) : 0.0;
  }
  int last_moved() const { return last_; }

 private:
  double delta_energy(int i, const double* trial) const;

  const GibbsConfig& cfg_;
  Rng rng_;
  std::vector<double> q_;
  double width_;
  std::uint64_t attempts_ = 0;
  std::uint64_t accepted_ = 0;
  int last_ = -1;
};

/// Lattice start for N particles in the box; throws if it overlaps.
std::vector<double> lattice_start(int N, const Box& box, const PairPotential& p, double beta);

/// Runs cfg.chains chains and calls `visit(chain, sweep, positions)` after
/// every stride sweeps past burn-in. Chains run in index order when workers
/// is 1; otherwise concurrently, each on its own thread, so `visit` must be
/// safe to call from several threads for different chains. Returns the mean
/// post-burn-in acceptance rate.
double gibbs_sample(const GibbsConfig& cfg,
                    const std::function<void(int, std::uint64_t, const std::vector<double>&)>& visit);

enum class CorrelationKind { one_point, two_point, two_point_labelled, truncated_labelled };

std::string_view to_string(CorrelationKind k);
CorrelationKind parse_correlation_kind(std::string_view s);

struct Bin {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
  std::uint64_t count = 0;
  bool flagged = false;
};

struct CorrelationTable {
  CorrelationKind kind = CorrelationKind::one_point;
  std::vector<Bin> bins;
  std::uint64_t snapshots = 0;
  double acceptance = 0.0;
  /// For one-point: integral of rho^(1) over the box and its error.
  double integral = 0.0;
  double integral_error = 0.0;
  std::string csv() const;
};

/// Histogram estimators from Gibbs snapshots, jackknife errors over blocks.
///  one_point: rho^(1) along axis 0 (slabs of the box), bins over (-l/2, l/2].
///  two_point: rho^(2) averaged over q_1 as a function of the torus distance
///             (periodic only), bins over (0, r_max], r_max <= l/2.
///  two_point_labelled: the same for rho^(2),lab.
///  truncated_labelled: rho^(2),lab - 1 per distance bin (periodic only,
///             where rho^(1),lab = 1).
CorrelationTable correlation_estimate(const GibbsConfig& cfg, CorrelationKind kind, int bins,
                                      double r_max = 0.0, int blocks = 20);

}  // namespace cex
