#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "cex/error.hpp"
#include "cex/oracle.hpp"

namespace cex {

std::vector<double> lattice_start(int N, const Box& box, const PairPotential& p, double beta) {
  if (N < 1) fail_input("Gibbs sampling needs N >= 1");
  const int dim = box.dim;
  int side = 1;
  while (std::pow(side, dim) < N) ++side;
  const double a = box.ell / side;
  std::vector<double> q(static_cast<std::size_t>(N * dim));
  for (int i = 0; i < N; ++i) {
    int rest = i;
    for (int k = 0; k < dim; ++k) {
      q[static_cast<std::size_t>(i * dim + k)] = -box.ell / 2 + (rest % side + 0.5) * a;
      rest /= side;
    }
  }
  if (!std::isfinite(beta * total_energy(p, q, dim, &box))) {
    throw Error(ErrorKind::runtime, "cannot place " + std::to_string(N) +
                                        " particles on a lattice without overlap (spacing " +
                                        std::to_string(a) + ")");
  }
  return q;
}

MetropolisChain::MetropolisChain(const GibbsConfig& cfg, int chain_index)
    : cfg_(cfg),
      rng_(stream_seed(cfg.seed, static_cast<std::uint64_t>(chain_index))),
      q_(lattice_start(cfg.N, cfg.box, cfg.potential, cfg.beta)),
      width_(cfg.width > 0 ? cfg.width : std::min(cfg.box.ell, cfg.box.ell / cfg.N)) {}

double MetropolisChain::delta_energy(int i, const double* trial) const {
  const int dim = cfg_.box.dim;
  const double* qi = &q_[static_cast<std::size_t>(i * dim)];
  double de = 0.0;
  double x[3];
  for (int j = 0; j < cfg_.N; ++j) {
    if (j == i) continue;
    const double* qj = &q_[static_cast<std::size_t>(j * dim)];
    cfg_.box.displacement(trial, qj, x);
    const double vn = cfg_.potential.eval(x, dim);
    if (std::isinf(vn)) return HUGE_VAL;
    cfg_.box.displacement(qi, qj, x);
    de += vn - cfg_.potential.eval(x, dim);
  }
  return de;
}

bool MetropolisChain::step() {
  const int dim = cfg_.box.dim;
  const int i = static_cast<int>(uniform01(rng_) * cfg_.N);
  last_ = i;
  double trial[3];
  for (int k = 0; k < dim; ++k) {
    trial[k] = q_[static_cast<std::size_t>(i * dim + k)] + width_ * (uniform01(rng_) - 0.5);
  }
  ++attempts_;
  if (!cfg_.box.wrap(trial)) return false;
  const double de = delta_energy(i, trial);
  if (std::isinf(de)) return false;
  if (de > 0.0 && uniform01(rng_) >= std::exp(-cfg_.beta * de)) return false;
  std::copy(trial, trial + dim, &q_[static_cast<std::size_t>(i * dim)]);
  ++accepted_;
  return true;
}

void MetropolisChain::sweep() {
  for (int s = 0; s < cfg_.N; ++s) step();
}

void MetropolisChain::burn_in() {
  const bool tune = !(cfg_.width > 0);
  for (std::uint64_t s = 0; s < cfg_.burn_in; ++s) {
    sweep();
    if (tune && (s + 1) % 10 == 0) {
      width_ *= acceptance() > 0.4 ? 1.1 : 1 / 1.1;
      width_ = std::min(width_, cfg_.box.ell);
      attempts_ = accepted_ = 0;
    }
  }
  attempts_ = accepted_ = 0;
}

double gibbs_sample(const GibbsConfig& cfg,
                    const std::function<void(int, std::uint64_t, const std::vector<double>&)>& visit) {
  if (cfg.chains < 1) fail_input("Gibbs sampling needs at least one chain");
  if (cfg.sweeps == 0) fail_input("Gibbs sampling needs sweeps > 0");
  if (cfg.box.bc == BoundaryCondition::periodic && !(cfg.box.ell > 2 * cfg.potential.range())) {
    fail_input("periodic box needs l > 2R");
  }
  const std::uint64_t stride = cfg.stride ? cfg.stride : 10 * static_cast<std::uint64_t>(cfg.N);
  std::vector<double> acc(static_cast<std::size_t>(cfg.chains), 0.0);
  auto run = [&](int c) {
    MetropolisChain chain(cfg, c);
    chain.burn_in();
    for (std::uint64_t s = 1; s <= cfg.sweeps; ++s) {
      chain.sweep();
      if (s % stride == 0) visit(c, s, chain.positions());
    }
    acc[static_cast<std::size_t>(c)] = chain.acceptance();
  };
  auto mean_acceptance = [&] {
    double m = 0.0;
    for (double a : acc) m += a;
    return m / cfg.chains;
  };
  int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, cfg.chains);
  if (workers == 1) {
    for (int c = 0; c < cfg.chains; ++c) run(c);
    return mean_acceptance();
  }
  for (int first = 0; first < cfg.chains; first += workers) {
    std::vector<std::thread> pool;
    for (int c = first; c < std::min(cfg.chains, first + workers); ++c) pool.emplace_back(run, c);
    for (auto& t : pool) t.join();
  }
  return mean_acceptance();
}

std::string_view to_string(CorrelationKind k) {
  switch (k) {
    case CorrelationKind::one_point: return "one-point";
    case CorrelationKind::two_point: return "two-point";
    case CorrelationKind::two_point_labelled: return "two-point-labelled";
    case CorrelationKind::truncated_labelled: return "truncated-labelled";
  }
  return "?";
}

CorrelationKind parse_correlation_kind(std::string_view s) {
  for (auto k : {CorrelationKind::one_point, CorrelationKind::two_point,
                 CorrelationKind::two_point_labelled, CorrelationKind::truncated_labelled}) {
    if (s == to_string(k)) return k;
  }
  fail_input("unknown correlation kind '" + std::string(s) +
             "' (one-point|two-point|two-point-labelled|truncated-labelled)");
}

std::string CorrelationTable::csv() const {
  std::string out = "r_lo,r_hi,value,stderr\n";
  char line[128];
  for (const auto& b : bins) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", b.lo, b.hi, b.value, b.error);
    out += line;
  }
  return out;
}

namespace {

double shell_measure(int dim, double lo, double hi) {
  switch (dim) {
    case 1: return 2 * (hi - lo);
    case 2: return std::numbers::pi * (hi * hi - lo * lo);
    default: return 4.0 / 3.0 * std::numbers::pi * (hi * hi * hi - lo * lo * lo);
  }
}

}  // namespace

CorrelationTable correlation_estimate(const GibbsConfig& cfg, CorrelationKind kind, int nbins,
                                      double r_max, int blocks) {
  if (nbins < 1) fail_input("need at least one bin");
  if (blocks < 2) fail_input("jackknife needs at least two blocks");
  const Box& box = cfg.box;
  const int dim = box.dim;
  const int N = cfg.N;
  const bool pair = kind != CorrelationKind::one_point;
  if (pair) {
    if (box.bc != BoundaryCondition::periodic) {
      fail_input("pair-distance estimators assume periodic bc (translation invariance)");
    }
    if (N < 2) fail_input("pair estimators need N >= 2");
    if (r_max <= 0.0) r_max = box.ell / 2;
    if (r_max > box.ell / 2 + 1e-12) fail_input("r_max must not exceed l/2");
  }
  const double lo = pair ? 0.0 : -box.ell / 2;
  const double hi = pair ? r_max : box.ell / 2;
  const double width = (hi - lo) / nbins;

  const std::uint64_t stride = cfg.stride ? cfg.stride : 10 * static_cast<std::uint64_t>(N);
  const std::uint64_t per_chain = cfg.sweeps / stride;
  if (per_chain < static_cast<std::uint64_t>(blocks)) {
    fail_input("fewer snapshots per chain than jackknife blocks");
  }
  // counts[(chain * blocks + block) * nbins + bin], snaps[chain * blocks + block]
  const std::size_t cells = static_cast<std::size_t>(cfg.chains) * static_cast<std::size_t>(blocks);
  std::vector<double> counts(cells * static_cast<std::size_t>(nbins), 0.0);
  std::vector<double> snaps(cells, 0.0);
  const double acceptance = gibbs_sample(cfg, [&](int c, std::uint64_t sweep, const std::vector<double>& q) {
    const std::uint64_t idx = std::min<std::uint64_t>(sweep / stride - 1, per_chain - 1);
    const std::size_t cell = static_cast<std::size_t>(c) * static_cast<std::size_t>(blocks) +
                             static_cast<std::size_t>(idx * static_cast<std::uint64_t>(blocks) / per_chain);
    snaps[cell] += 1;
    double* row = &counts[cell * static_cast<std::size_t>(nbins)];
    if (!pair) {
      for (int i = 0; i < N; ++i) {
        const int b = static_cast<int>((q[static_cast<std::size_t>(i * dim)] - lo) / width);
        row[std::clamp(b, 0, nbins - 1)] += 1;
      }
      return;
    }
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        const double r = box.distance(&q[static_cast<std::size_t>(i * dim)],
                                      &q[static_cast<std::size_t>(j * dim)]);
        if (r >= hi) continue;
        row[static_cast<int>(r / width)] += 1;
      }
    }
  });

  const double volume = box.volume();
  const double npairs = 0.5 * N * (N - 1);
  auto estimate = [&](const std::vector<double>& c, double s, int bin) {
    const double b_lo = lo + bin * width;
    if (!pair) return c[static_cast<std::size_t>(bin)] / (s * width * volume / box.ell);
    const double frac = c[static_cast<std::size_t>(bin)] / (s * npairs);
    const double lab = volume * frac / shell_measure(dim, b_lo, b_lo + width);
    switch (kind) {
      case CorrelationKind::two_point: return lab * N * (N - 1) / (volume * volume);
      case CorrelationKind::truncated_labelled: return lab - 1.0;
      default: return lab;
    }
  };

  std::vector<double> total(static_cast<std::size_t>(nbins), 0.0);
  double total_snaps = 0.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    total_snaps += snaps[cell];
    for (int b = 0; b < nbins; ++b) total[static_cast<std::size_t>(b)] += counts[cell * static_cast<std::size_t>(nbins) + static_cast<std::size_t>(b)];
  }

  CorrelationTable out;
  out.kind = kind;
  out.snapshots = static_cast<std::uint64_t>(total_snaps);
  out.acceptance = acceptance;
  std::vector<double> loo(static_cast<std::size_t>(nbins));
  std::vector<double> integral_loo(cells, 0.0);
  for (int b = 0; b < nbins; ++b) {
    Bin bin;
    bin.lo = lo + b * width;
    bin.hi = bin.lo + width;
    bin.value = estimate(total, total_snaps, b);
    bin.count = static_cast<std::uint64_t>(total[static_cast<std::size_t>(b)]);
    bin.flagged = bin.count < 10;
    double mean = 0.0;
    std::vector<double> theta(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      std::vector<double> t = total;
      for (int k = 0; k < nbins; ++k) t[static_cast<std::size_t>(k)] -= counts[cell * static_cast<std::size_t>(nbins) + static_cast<std::size_t>(k)];
      theta[cell] = estimate(t, total_snaps - snaps[cell], b);
      mean += theta[cell];
      if (!pair) integral_loo[cell] += theta[cell] * width * volume / box.ell;
    }
    mean /= static_cast<double>(cells);
    double ss = 0.0;
    for (double t : theta) ss += (t - mean) * (t - mean);
    bin.error = std::sqrt(ss * static_cast<double>(cells - 1) / static_cast<double>(cells));
    out.bins.push_back(bin);
    if (!pair) out.integral += bin.value * width * volume / box.ell;
  }
  if (!pair) {
    double mean = 0.0;
    for (double v : integral_loo) mean += v;
    mean /= static_cast<double>(cells);
    double ss = 0.0;
    for (double v : integral_loo) ss += (v - mean) * (v - mean);
    out.integral_error = std::sqrt(ss * static_cast<double>(cells - 1) / static_cast<double>(cells));
  }
  return out;
}

}  // namespace cex
