#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cex/graph.hpp"
#include "cex/measurement.hpp"
#include "cex/oracle.hpp"
#include "cex/potential.hpp"
#include "cex/weights.hpp"

namespace cex {

/// Indicator of the eta-ball around `center` (wrapped on the torus).
struct SourceFunction {
  std::vector<double> center;
  double eta = 0.1;

  double operator()(const double* q, const Box& box) const;
  /// |B_eta| in the box dimension.
  double volume(int dim) const { return ball_volume(dim, eta); }
};

struct PsiRequest {
  int N = 2;
  Box box;
  PairPotential potential;
  double beta = 1.0;
  /// One or two sources; h_i acts on particle i.
  std::vector<SourceFunction> sources;
};

/// Psi(a1, a2) = c00 + a1 c10 + a2 c01 + a1 a2 c11 (multilinear in a).
/// Monte Carlo paths estimate the normalized averages below independently;
/// the c's are rebuilt from them.
struct PsiCoefficients {
  Measurement c00, c10, c01, c11;
  /// Ball-conditioned averages: c10 |Lambda| / |B_1|, c01 |Lambda| / |B_2| and
  /// c11 |Lambda|^2 / (|B_1||B_2|), with their errors.
  Measurement m10, m01, m11;
  double volume = 0.0;
  double ball1 = 0.0;
  double ball2 = 0.0;
  Method method = Method::exact;

  double psi(double a1, double a2) const {
    return c00.value + a1 * c10.value + a2 * c01.value + a1 * a2 * c11.value;
  }
  std::string json() const;
};

PsiCoefficients psi_coefficients(const PsiRequest& req, const McOptions& mc = {});

/// Psi(a1, a2) integrated directly with the factors (1 + a_i h_i(q_i)).
Measurement psi_bruteforce(const PsiRequest& req, double a1, double a2, const McOptions& mc = {});

struct DerivativeEstimate {
  /// From the multilinear coefficients.
  Measurement value;
  /// Central finite differences of log Psi with step `step`.
  double finite_difference = 0.0;
  double step = 1e-3;
  /// |value - finite_difference| above the stencil tolerance.
  bool flagged = false;
};

/// |Lambda| d/da1 log Psi(0, 0) / |B_eta|: eta-averaged rho^(1),lab at the source.
DerivativeEstimate one_point_from_psi(const PsiRequest& req, const McOptions& mc = {},
                                      double step = 1e-3);

/// |Lambda|^2 d^2/da1 da2 log Psi(0, 0) / (|B_1||B_2|): eta-averaged truncated
/// labelled two-point function.
DerivativeEstimate truncated_two_point(const PsiRequest& req, const McOptions& mc = {},
                                       double step = 1e-3);

/// Polynomial extrapolation to eta = 0 through (eta_k, value_k) (Neville).
double extrapolate_to_zero(const std::vector<double>& eta, const std::vector<double>& values);

/// Coefficient of prod_{i in A} a_i in the activity of the augmented polymer
/// (V, A): particles 1..|A| of V carry the sources. |V| = 1 with A = {i} is
/// the special singleton. A empty reduces to omega.
Measurement augmented_activity(int v_size, const std::vector<int>& A,
                               const std::vector<SourceFunction>& sources,
                               const PairPotential& p, double beta, const Box& box,
                               const McOptions& mc = {});

/// N = 2 resummation of the polymer {1,2} with multiplicity n next to the
/// marked polymer: sum_{n=0}^{K} c_{1,n} w^n with w = -x, c_{1,n} computed as
/// cluster coefficients, against 1 / (1 - x). Exact in rationals.
struct Resummation {
  Rational partial;
  Rational closed;
  Rational remainder;  // closed - partial
  bool exact_match = false;  // remainder == x^{K+1} / (1 - x)
  bool signs_ok = false;     // c_{1,n} == (-1)^n for every n <= K
};

Resummation geometric_resummation(const Rational& x, int K);

/// rho^(2) - rho^(1) rho^(1) in terms of labelled quantities.
inline double unlabelled_truncated(int N, double volume, double lab_truncated, double lab_two_point) {
  const double rho = N / volume;
  return rho * rho * lab_truncated - N / (volume * volume) * lab_two_point;
}

struct DecayRow {
  double r = 0.0;
  double truncated = 0.0;
  double error = 0.0;
  double envelope = 0.0;
  bool pass = true;
  bool flagged = false;
};

struct DecayProfile {
  std::vector<DecayRow> rows;
  double C = 0.0;  // C(beta, R)
  double C2 = 0.0;
  double C3 = 0.0;
  /// Rate of P + A e^{-kappa r} fitted on [2R, 8R].
  double rate = 0.0;
  double plateau = 0.0;
  double amplitude = 0.0;
  /// Amplitude at 2R exceeds twice its error.
  bool rate_resolved = false;
  double acceptance = 0.0;
  std::uint64_t snapshots = 0;
  std::string csv() const;
};

/// Truncated labelled correlation from a Gibbs run at each separation (the
/// histogram bin containing it), against the envelope
/// 1_{r<=R} / (1 - C/|Lambda|) + C2 C/|Lambda| + C3 e^{-r/R}.
/// C2 is fitted on bins with r >= 8R and C3 on bins in (R, 2R].
DecayProfile decay_profile(const GibbsConfig& cfg, const std::vector<double>& separations,
                           double bin_width, int blocks = 20);

}  // namespace cex
