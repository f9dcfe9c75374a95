#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cex/measurement.hpp"
#include "cex/potential.hpp"
#include "cex/weights.hpp"

namespace cex {

struct KPReport {
  double a = 1.0;
  double c = 0.0;
  double rho = 0.0;
  double C = 0.0;            // C(beta, R)
  double delta = 0.0;        // rho C e^{2(2 beta B + a + c)}
  double delta_prime = 0.0;  // rho e^{2 beta B + a + c} C
  double series_bound = 0.0; // 2 e^{2 beta B + a + c} / sqrt(pi) * d'e / (1 - d'e)
  double margin = 0.0;       // a - series_bound
  /// delta' e < 1: the activity series converges.
  bool pass = false;
  /// pass and series_bound <= a.
  bool condition_met = false;
};

KPReport kp_check(const PairPotential& p, double beta, double rho, double a, double c = 0.0,
                  int dim = 1);

struct SeriesOrder {
  int n = 0;
  Measurement beta_n;
  double term = 0.0;  // -beta_n rho^{n+1} / (n + 1)
};

struct FreeEnergySeries {
  double rho = 0.0;
  double ideal = 0.0;  // rho (log rho - 1)
  double value = 0.0;  // ideal + sum of terms
  std::vector<SeriesOrder> orders;
  double fit_C = 0.0;
  double fit_c = 0.0;
  double tail_bound = 0.0;
  bool diverging = false;
};

FreeEnergySeries free_energy_series(double rho, double beta, const PairPotential& p, int n_max,
                                    int dim, const McOptions& mc = {});

struct SeriesRow {
  int n = 0;
  double P = 0.0;
  double Bterm = 0.0;
  double F = 0.0;
  double tail_bound = 0.0;
};

struct SeriesReport {
  int N = 0;
  double volume = 0.0;
  int n_max = 0;
  std::vector<SeriesRow> rows;
  double ideal_density = 0.0;        // (1/|Lambda|) log(|Lambda|^N / N!)
  double interaction_density = 0.0;  // (N/|Lambda|) sum F_n
  double tail_bound = 0.0;           // (N/|Lambda|) * bound on sum_{n > n_max} |F_n|
  std::string csv() const;
};

/// P_{N,|Lambda|}(n) = (N-1)...(N-n) / |Lambda|^n.
double p_factor(int N, double volume, int n);

SeriesReport finite_volume_terms(int N, const Box& box, double beta, const PairPotential& p,
                                 int n_max, const McOptions& mc = {});

/// (1/|Lambda|)(log sqrt(2 pi N) + 1/(12 N)).
double stirling_correction(int N, double volume);
/// log(|Lambda|^N / N!) computed with lgamma.
double log_ideal_partition(int N, double volume);

/// |prod_{i<=n} (1 - i/N) - 1| and the envelope c n(n+1)/(2N), c = sqrt 2 / (1 - n/N).
double product_deviation(int N, int n);
double product_envelope(int N, int n);

struct BoundarySplitReport {
  double C_rho = 0.0;
  int C_rho_terms = 0;
  double S0_bound = 0.0;
  double S1_star = 0.0;
  double S1_starstar_bound = 0.0;
  double chain_factor = 0.0;  // sum_{n>=1} (2ae)^n / 2
  bool converged = false;
};

/// C(rho) series truncated below 1e-12.
double c_of_rho(double rho, double beta, const PairPotential& p, double a, int dim, int* terms = nullptr);

BoundarySplitReport boundary_split_bound(int N, const Box& box, double beta,
                                         const PairPotential& p, double a,
                                         const McOptions& mc = {});

/// For each size and random configuration, sum_{i in V} sum_eps F(eps_i)/|V|
/// must be exactly 1 (checked as an integer count of active (i, eps) pairs).
bool rooted_split_partition_identity(const Box& box, double range, const std::vector<int>& sizes,
                                     std::uint64_t configs, std::uint64_t seed);

/// B*(n) by direct multi-index summation over I* with A(I) = [n+1], using
/// omega per cardinality. n <= 3.
Measurement b_star_direct(int n, const Box& box, double beta, const PairPotential& p,
                          const McOptions& mc = {});

}  // namespace cex
