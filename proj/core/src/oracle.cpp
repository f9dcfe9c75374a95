#include "cex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "cex/error.hpp"
#include "cex/expansion.hpp"

namespace cex {

namespace {

double boltzmann_r(const PairPotential& p, double beta, double r) {
  const double v = p.eval_r(r);
  return std::isinf(v) ? (v > 0 ? 0.0 : HUGE_VAL) : std::exp(-beta * v);
}

// e^{-beta V(r)}, averaged over both sides when r sits on a breakpoint.
double boltzmann_tie(const PairPotential& p, double beta, double r) {
  for (double b : p.breakpoints()) {
    if (b > 0.0 && std::abs(r - b) <= 1e-9 * b) {
      return 0.5 * (boltzmann_r(p, beta, b * (1 - 1e-12)) + boltzmann_r(p, beta, b * (1 + 1e-12)));
    }
  }
  return boltzmann_r(p, beta, r);
}

// Pair factor per integer grid displacement (per-axis offsets + m).
std::vector<double> displacement_table(const Box& box, const PairPotential& p, double beta,
                                       int m) {
  const int dim = box.dim;
  const double h = box.ell / m;
  const int side = 2 * m;
  std::vector<double> t(static_cast<std::size_t>(std::pow(side, dim)));
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    std::size_t rest = idx;
    double r2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      int off = static_cast<int>(rest % side) - m;
      rest /= side;
      if (box.bc == BoundaryCondition::periodic) {
        off = ((off % m) + m) % m;
        if (2 * off > m) off -= m;
      }
      r2 += (off * h) * (off * h);
    }
    t[idx] = boltzmann_tie(p, beta, std::sqrt(r2));
  }
  return t;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

void check_rods(int N, double ell, double R) {
  if (N < 0) fail_input("particle number must be >= 0");
  if (!(ell > 0) || !(R >= 0)) fail_input("hard rods need l > 0 and R >= 0");
}

double certified_deviation = -1.0;
std::once_flag certified_once;

}  // namespace

double zint_midpoint(int N, const Box& box, const PairPotential& p, double beta, int m) {
  if (N < 0) fail_input("particle number must be >= 0");
  if (m < 1) fail_input("quadrature needs at least one point per axis");
  if (box.bc == BoundaryCondition::periodic && N >= 2 && !(box.ell > 2 * p.range())) {
    fail_input("periodic box needs l > 2R");
  }
  if (N < 2 || p.kind() == PotentialKind::ideal) return 1.0;
  const int dim = box.dim;
  const auto table = displacement_table(box, p, beta, m);
  const int vars = N * dim;
  std::vector<int> g(static_cast<std::size_t>(vars), 0);
  std::vector<std::size_t> stride(static_cast<std::size_t>(dim), 1);
  for (int k = 1; k < dim; ++k) stride[static_cast<std::size_t>(k)] = stride[static_cast<std::size_t>(k - 1)] * 2 * m;

  double sum = 0.0;
  for (;;) {
    double w = 1.0;
    for (int i = 0; i < N && w != 0.0; ++i) {
      for (int j = i + 1; j < N; ++j) {
        std::size_t idx = 0;
        for (int k = 0; k < dim; ++k) {
          const int off = g[static_cast<std::size_t>(j * dim + k)] - g[static_cast<std::size_t>(i * dim + k)] + m;
          idx += static_cast<std::size_t>(off) * stride[static_cast<std::size_t>(k)];
        }
        w *= table[idx];
        if (w == 0.0) break;
      }
    }
    sum += w;
    int c = vars - 1;
    while (c >= 0 && ++g[static_cast<std::size_t>(c)] == m) g[static_cast<std::size_t>(c--)] = 0;
    if (c < 0) break;
  }
  return sum / std::pow(static_cast<double>(m), vars);
}

PartitionResult z_bruteforce(int N, const Box& box, const PairPotential& p, double beta,
                             Method method, std::uint64_t budget, std::uint64_t seed) {
  if (N < 0) fail_input("particle number must be >= 0");
  PartitionResult res;
  res.method = method;
  res.log_ideal = N * std::log(box.volume()) - log_factorial(N);
  if (N < 2 || p.kind() == PotentialKind::ideal) {
    res.method = Method::exact;
    res.logZ = res.log_ideal;
    return res;
  }
  if (box.bc == BoundaryCondition::periodic && !(box.ell > 2 * p.range())) {
    fail_input("periodic box needs l > 2R");
  }

  if (method == Method::quadrature || method == Method::exact) {
    res.method = Method::quadrature;
    if (N > 4) fail_cap("z_bruteforce: quadrature is limited to N <= 4");
    // Grid spacing h with every discontinuity radius a multiple of 2h, so the
    // half grid is aligned too.
    auto aligned = [&](int m) {
      for (double b : p.breakpoints()) {
        if (b <= 0.0) continue;
        const double x = b * m / (2 * box.ell);
        if (std::abs(x - std::round(x)) > 1e-9) return false;
      }
      return true;
    };
    const double dims = static_cast<double>(N * box.dim);
    int m = 0;
    for (int c = 60; c >= 4; c -= 2) {
      if (std::pow(c, dims) > static_cast<double>(budget)) continue;
      if (aligned(c)) { m = c; break; }
      if (m == 0) m = -c;  // largest affordable, unaligned
    }
    if (m == 0) {
      res.flagged = true;
      m = 4;
    }
    if (m < 0) m = -m;
    const double fine = zint_midpoint(N, box, p, beta, m);
    const double coarse = zint_midpoint(N, box, p, beta, m / 2);
    // Midpoint error is O(h^2) once ties are split evenly.
    const double z = (4 * fine - coarse) / 3;
    res.zint_error = std::abs(z - fine);
    res.samples = static_cast<std::uint64_t>(std::pow(m, dims) + std::pow(m / 2, dims));
    res.flagged = res.flagged || m < 60 || !aligned(m);
    if (!(z > 0.0)) {
      res.jammed = true;
      res.log_zint = -HUGE_VAL;
    } else {
      res.log_zint = std::log(z);
    }
    res.logZ = res.log_ideal + res.log_zint;
    return res;
  }

  if (N > 10) fail_cap("z_bruteforce: Monte Carlo is limited to N <= 10");
  if (budget == 0) fail_input("z_bruteforce: Monte Carlo budget is zero");
  const int dim = box.dim;
  const auto acc = run_streams(
      seed, 1, budget,
      [&](int, Rng& rng, std::uint64_t count, Welford& w) {
        std::vector<double> q(static_cast<std::size_t>(N * dim));
        for (std::uint64_t s = 0; s < count; ++s) {
          for (auto& x : q) x = box.ell * (uniform01(rng) - 0.5);
          double v = 1.0;
          for (int i = 0; i < N && v != 0.0; ++i) {
            for (int j = i + 1; j < N && v != 0.0; ++j) {
              v *= boltzmann_r(p, beta, box.distance(&q[static_cast<std::size_t>(i * dim)],
                                                     &q[static_cast<std::size_t>(j * dim)]));
            }
          }
          w.add(v);
        }
      },
      1);
  res.seed = seed;
  res.samples = acc.count();
  res.zint_error = acc.std_error();
  if (acc.mean() > 0.0) {
    res.log_zint = std::log(acc.mean());
  } else {
    res.log_zint = -HUGE_VAL;
    res.flagged = true;
  }
  res.logZ = res.log_ideal + res.log_zint;
  return res;
}

double certify_hard_rod_formulas() {
  double worst = 0.0;
  const auto rods = PairPotential::hard_core(1.0);
  for (auto bc : {BoundaryCondition::zero, BoundaryCondition::periodic}) {
    for (int N : {2, 3}) {
      const Box box(10.0, 1, bc);
      const auto q = z_bruteforce(N, box, rods, 1.0, Method::quadrature, 100'000'000, 0);
      const double exact = bc == BoundaryCondition::zero
                               ? N * std::log(10.0 - (N - 1)) - log_factorial(N)
                               : std::log(10.0) + (N - 1) * std::log(10.0 - N) - log_factorial(N);
      worst = std::max(worst, std::abs(std::expm1(q.logZ - exact)));
    }
  }
  return worst;
}

PartitionResult z_exact_hard_rods(int N, double ell, double R, BoundaryCondition bc) {
  check_rods(N, ell, R);
  std::call_once(certified_once, [] { certified_deviation = certify_hard_rod_formulas(); });
  if (!(certified_deviation <= 1e-4)) {
    throw Error(ErrorKind::runtime,
                "hard-rod closed form disagrees with quadrature (relative deviation " +
                    std::to_string(certified_deviation) + ")");
  }
  PartitionResult res;
  res.method = Method::exact;
  res.log_ideal = N * std::log(ell) - log_factorial(N);
  double logz;
  if (N == 0) {
    logz = 0.0;
  } else if (bc == BoundaryCondition::zero) {
    const double free = ell - (N - 1) * R;
    logz = free > 0 ? N * std::log(free) - log_factorial(N) : -HUGE_VAL;
  } else {
    const double free = ell - N * R;
    if (N == 1) {
      logz = std::log(ell);
    } else {
      logz = free > 0 ? std::log(ell) + (N - 1) * std::log(free) - log_factorial(N) : -HUGE_VAL;
    }
  }
  res.jammed = std::isinf(logz);
  res.logZ = logz;
  res.log_zint = logz - res.log_ideal;
  return res;
}

double tonks_beta_f(double rho, double R) {
  if (rho == 0.0) return 0.0;
  if (!(rho > 0.0) || !(rho * R < 1.0)) fail_input("Tonks free energy needs 0 <= rho R < 1");
  return rho * std::log(rho / (1 - rho * R)) - rho;
}

}  // namespace cex
