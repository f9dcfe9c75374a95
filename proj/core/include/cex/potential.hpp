#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cex/measurement.hpp"

namespace cex {

enum class BoundaryCondition { periodic, zero };

std::string_view to_string(BoundaryCondition bc);
BoundaryCondition parse_bc(std::string_view s);

/// Box (-l/2, l/2]^d.
struct Box {
  double ell = 1.0;
  int dim = 1;
  BoundaryCondition bc = BoundaryCondition::periodic;

  Box() = default;
  Box(double ell, int dim, BoundaryCondition bc);

  double volume() const;
  double surface() const;
  /// Distance from q to the complement of the box (zero outside).
  double distance_to_boundary(const double* q) const;
  /// q_j - q_i, minimal image when periodic.
  void displacement(const double* qi, const double* qj, double* out) const;
  double distance(const double* qi, const double* qj) const;
  /// Maps a point back into the box (periodic) or reports whether it is inside.
  bool wrap(double* q) const;
};

enum class PotentialKind { ideal, hard_core, square_well, tabulated };

std::string_view to_string(PotentialKind k);

/// Finite-range radial pair potential.
class PairPotential {
 public:
  static PairPotential ideal();
  static PairPotential hard_core(double range);
  /// -depth on (core, range], +inf on [0, core] when core > 0.
  static PairPotential square_well(double range, double depth, double core = 0.0,
                                   double stability = -1.0);
  /// Linear interpolation of (r, value) nodes; values may be +inf. Zero beyond `range`.
  static PairPotential tabulated(std::vector<std::pair<double, double>> table, double range,
                                 double stability);

  PotentialKind kind() const { return kind_; }
  double range() const { return range_; }
  /// Stability constant B (H >= -B N).
  double stability() const { return stability_; }
  double depth() const { return depth_; }
  double core() const { return core_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  /// True when e^{-beta V} only takes the values 0 and 1.
  bool is_hard_core_like() const {
    return kind_ == PotentialKind::hard_core || kind_ == PotentialKind::ideal;
  }

  double eval_r(double r) const;
  double eval(const double* x, int dim) const;
  /// e^{-beta V} - 1 with e^{-inf} = 0.
  double mayer_r(double beta, double r) const;
  double mayer(double beta, const double* x, int dim) const;

  /// Radii where V may be discontinuous or change slope, within [0, range].
  std::vector<double> breakpoints() const;

 private:
  PotentialKind kind_ = PotentialKind::ideal;
  double range_ = 0.0;
  double stability_ = 0.0;
  double depth_ = 0.0;
  double core_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

/// Mayer function of the periodized potential. Requires periodic bc and
/// l > 2R so only the minimal image contributes.
double periodized_f(const PairPotential& p, double beta, const double* qi, const double* qj,
                    const Box& box);

/// Integral over R^d of |e^{-beta V} - 1|.
Measurement c_beta(const PairPotential& p, double beta, int dim);
/// Same integral by a composite midpoint rule on [-R, R]^d with `cells` per axis.
double c_beta_cube_midpoint(const PairPotential& p, double beta, int dim, int cells);

double ball_volume(int dim, double radius);

struct StabilityProbe {
  double min_energy_per_particle = 0.0;
  std::uint64_t finite_samples = 0;
  bool pass = true;
};

/// Random n-point configurations in a cube sized so that particles interact.
StabilityProbe stability_probe(const PairPotential& p, int dim, int n, std::uint64_t trials,
                               std::uint64_t seed);

/// Total energy of a configuration (flat coordinates, n * dim).
double total_energy(const PairPotential& p, const std::vector<double>& q, int dim,
                    const Box* box = nullptr);

/// `key = value` text: kind, R, B, depth, core, table (CSV path, relative to
/// `base_dir`).
PairPotential parse_potential(const std::string& text, const std::string& base_dir = ".");
PairPotential load_potential(const std::string& path);
std::vector<std::pair<double, double>> parse_table_csv(const std::string& text);

}  // namespace cex
