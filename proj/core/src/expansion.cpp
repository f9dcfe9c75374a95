#include "cex/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "cex/error.hpp"
#include "cex/graph.hpp"
#include "cex/random.hpp"

namespace cex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct TailFit {
  double C = 0.0;
  double c = 0.0;
  bool ok = false;
};

// Least-squares slope of log|F_n| against n, then the smallest C that puts
// every computed order under C e^{-cn}.
TailFit fit_tail(const std::vector<std::pair<int, double>>& pts) {
  std::vector<std::pair<double, double>> xy;
  for (auto [n, f] : pts) {
    if (f != 0.0 && std::isfinite(f)) xy.emplace_back(n, std::log(std::abs(f)));
  }
  TailFit fit;
  if (xy.size() < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(xy.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.c = -slope;
  double logC = -kInf;
  for (auto [x, y] : xy) logC = std::max(logC, y + fit.c * x);
  fit.C = std::exp(logC);
  fit.ok = true;
  return fit;
}

// Bound on sum_{n > after} C e^{-cn}.
double tail_sum(const TailFit& fit, int after) {
  if (!fit.ok) return kInf;
  if (fit.c <= 0.0) return kInf;
  return fit.C * std::exp(-fit.c * (after + 1)) / (-std::expm1(-fit.c));
}

}  // namespace

KPReport kp_check(const PairPotential& p, double beta, double rho, double a, double c, int dim) {
  if (!(a > 0.0)) fail_input("kp_check: a must be positive");
  if (c < 0.0) fail_input("kp_check: c must be non-negative");
  if (rho < 0.0) fail_input("kp_check: density must be non-negative");
  KPReport r;
  r.a = a;
  r.c = c;
  r.rho = rho;
  r.C = c_beta(p, beta, dim).value;
  const double E = 2 * beta * p.stability() + a + c;
  r.delta_prime = rho * std::exp(E) * r.C;
  r.delta = rho * r.C * std::exp(2 * E);
  const double x = r.delta_prime * std::numbers::e;
  r.pass = x < 1.0;
  r.series_bound = r.pass ? 2 * std::exp(E) / std::sqrt(std::numbers::pi) * x / (1 - x) : kInf;
  r.margin = a - r.series_bound;
  r.condition_met = r.pass && r.series_bound <= a;
  return r;
}

FreeEnergySeries free_energy_series(double rho, double beta, const PairPotential& p, int n_max,
                                    int dim, const McOptions& mc) {
  if (!(rho > 0.0)) fail_input("free_energy_series: density must be positive");
  if (n_max < 0) fail_input("free_energy_series: n_max must be >= 0");
  FreeEnergySeries s;
  s.rho = rho;
  s.ideal = rho * (std::log(rho) - 1);
  s.value = s.ideal;
  std::vector<std::pair<int, double>> pts;
  for (int n = 1; n <= n_max; ++n) {
    McOptions opt = mc;
    opt.seed = stream_seed(mc.seed, static_cast<std::uint64_t>(n));
    SeriesOrder o;
    o.n = n;
    o.beta_n = beta_n(n, p, beta, dim, opt);
    o.term = -o.beta_n.value * std::pow(rho, n + 1) / (n + 1);
    s.value += o.term;
    pts.emplace_back(n, o.beta_n.value * std::pow(rho, n) / (n + 1));
    s.orders.push_back(o);
  }
  const bool all_zero = std::all_of(s.orders.begin(), s.orders.end(),
                                    [](const SeriesOrder& o) { return o.beta_n.value == 0.0; });
  if (all_zero) {
    s.tail_bound = p.kind() == PotentialKind::ideal ? 0.0 : kInf;
    return s;
  }
  const auto fit = fit_tail(pts);
  s.fit_C = fit.C;
  s.fit_c = fit.c;
  s.diverging = fit.ok && fit.c <= 0.0;
  s.tail_bound = rho * tail_sum(fit, n_max);
  return s;
}

double p_factor(int N, double volume, int n) {
  double P = 1.0;
  for (int i = 1; i <= n; ++i) P *= (N - i) / volume;
  return P;
}

std::string SeriesReport::csv() const {
  std::string out = "n,P,Bterm,F,tail_bound\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + fmt(r.P) + "," + fmt(r.Bterm) + "," + fmt(r.F) + "," +
           fmt(r.tail_bound) + "\n";
  }
  return out;
}

SeriesReport finite_volume_terms(int N, const Box& box, double beta, const PairPotential& p,
                                 int n_max, const McOptions& mc) {
  if (N < 2) fail_input("finite_volume_terms: N must be >= 2");
  if (n_max < 1) fail_input("finite_volume_terms: n_max must be >= 1");
  SeriesReport rep;
  rep.N = N;
  rep.volume = box.volume();
  rep.n_max = n_max;
  rep.ideal_density = log_ideal_partition(N, rep.volume) / rep.volume;
  std::vector<std::pair<int, double>> pts;
  double sum = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    SeriesRow row;
    row.n = n;
    row.P = p_factor(N, rep.volume, n);
    if (row.P != 0.0) {
      McOptions opt = mc;
      opt.seed = stream_seed(mc.seed, static_cast<std::uint64_t>(n));
      row.Bterm = beta_n(n, p, beta, box.dim, opt).value;
    }
    row.F = row.P * row.Bterm / (n + 1);
    sum += row.F;
    if (row.F != 0.0) pts.emplace_back(n, row.F);
    rep.rows.push_back(row);
  }
  const auto fit = fit_tail(pts);
  for (auto& row : rep.rows) {
    // P vanishes from order N on, so nothing remains past N - 1.
    if (row.n >= N - 1 || p.kind() == PotentialKind::ideal) {
      row.tail_bound = 0.0;
    } else {
      row.tail_bound = tail_sum(fit, row.n);
    }
  }
  rep.interaction_density = N / rep.volume * sum;
  rep.tail_bound = N / rep.volume * rep.rows.back().tail_bound;
  return rep;
}

double log_ideal_partition(int N, double volume) {
  return N * std::log(volume) - std::lgamma(N + 1.0);
}

double stirling_correction(int N, double volume) {
  if (N < 1) fail_input("stirling_correction: N must be >= 1");
  return (0.5 * std::log(2 * std::numbers::pi * N) + 1.0 / (12.0 * N)) / volume;
}

double product_deviation(int N, int n) {
  double prod = 1.0;
  for (int i = 1; i <= n; ++i) prod *= 1.0 - static_cast<double>(i) / N;
  return std::abs(prod - 1.0);
}

double product_envelope(int N, int n) {
  const double c = std::sqrt(2.0) / (1.0 - static_cast<double>(n) / N);
  return c * n * (n + 1) / (2.0 * N);
}

double c_of_rho(double rho, double beta, const PairPotential& p, double a, int dim, int* terms) {
  const double C = c_beta(p, beta, dim).value;
  const double E = 2 * beta * p.stability() + a;
  if (terms) *terms = 0;
  if (rho * C == 0.0) return 0.0;
  if (rho * std::exp(E) * C * std::numbers::e >= 1.0) return kInf;
  const double lrc = std::log(rho * C);
  double sum = 0.0;
  double prev = kInf;
  for (int n = 2; n < 1000000; ++n) {
    const double lt = (n - 1) * lrc - std::lgamma(n) + E * n + (n - 2) * std::log(n);
    const double t = std::exp(lt);
    sum += t;
    if (terms) *terms = n - 1;
    if (t < 1e-12 && t <= prev) return sum;
    prev = t;
  }
  return kInf;
}

BoundarySplitReport boundary_split_bound(int N, const Box& box, double beta,
                                         const PairPotential& p, double a,
                                         const McOptions& mc) {
  if (N < 1) fail_input("boundary_split_bound: N must be >= 1");
  if (!(a > 0.0)) fail_input("boundary_split_bound: a must be positive");
  BoundarySplitReport rep;
  const double vol = box.volume();
  const double rho = N / vol;
  rep.C_rho = c_of_rho(rho, beta, p, a, box.dim, &rep.C_rho_terms);
  rep.converged = std::isfinite(rep.C_rho);
  rep.S0_bound = rep.C_rho / box.ell;
  if (p.kind() == PotentialKind::ideal) {
    rep.converged = true;
    return rep;
  }
  if (N >= 2) {
    const int n_max = std::min(N - 1, 3);
    rep.S1_star = finite_volume_terms(N, box, beta, p, n_max, mc).interaction_density;
  }

  const double x = 2 * a * std::numbers::e;
  rep.chain_factor = x < 1.0 ? 0.5 * x / (1 - x) : kInf;
  const double C = c_beta(p, beta, box.dim).value;
  const double E = 2 * beta * p.stability() + a;
  if (!rep.converged || !std::isfinite(rep.chain_factor)) {
    rep.S1_starstar_bound = kInf;
    return rep;
  }
  // Per-polymer factor |omega| |V| e^{a|V|} <= e^{En} n^{n-1} C^{n-1} / |Lambda|^{n-1},
  // combined with the leading label-choice count for each chain position.
  const double lrc = std::log(rho * C);
  auto lb = [&](int n) { return (n - 1) * lrc + E * n + (n - 1) * std::log(n); };
  auto series = [&](auto&& logterm) {
    double sum = 0.0;
    double prev = kInf;
    for (int n = 2; n < 100000; ++n) {
      const double t = std::exp(logterm(n));
      sum += t;
      if (t < 1e-16 * std::max(sum, 1e-300) && t <= prev) break;
      prev = t;
    }
    return sum;
  };
  const double logN = std::log(static_cast<double>(N));
  // First: N^{n}/n!, middle: N^{n-1}/(n-1)!, last: N^{n-2}/(n-2)!; densities absorb |Lambda|.
  const double first_pair = series([&](int n) { return logN + lb(n) - std::lgamma(n + 1.0) + std::log(n * (n - 1) / 2.0); });
  const double first = series([&](int n) { return logN + lb(n) - std::lgamma(n + 1.0) + 2 * std::log(n); });
  const double middle = series([&](int n) { return lb(n) - std::lgamma(n) + 2 * std::log(n); });
  const double last = series([&](int n) { return lb(n) - logN - std::lgamma(n - 1.0); });
  double total = std::pow(rep.chain_factor, 2) * first_pair * last;
  for (int k = 3; k <= 4; ++k) {
    total += std::pow(rep.chain_factor, k) * first * std::pow(middle, k - 2) * last;
  }
  rep.S1_starstar_bound = total / vol;
  return rep;
}

bool rooted_split_partition_identity(const Box& box, double range, const std::vector<int>& sizes,
                                     std::uint64_t configs, std::uint64_t seed) {
  Rng rng(stream_seed(seed, 0));
  std::vector<double> q;
  for (int n : sizes) {
    if (n < 1) fail_input("rooted_split_partition_identity: sizes must be >= 1");
    q.resize(static_cast<std::size_t>(n * box.dim));
    for (std::uint64_t c = 0; c < configs; ++c) {
      for (auto& x : q) x = box.ell * (uniform01(rng) - 0.5);
      int active = 0;
      for (int i = 0; i < n; ++i) {
        for (int eps = 0; eps <= 1; ++eps) {
          active += root_colour(box, &q[static_cast<std::size_t>(i * box.dim)], range, n, eps) == 1.0;
        }
      }
      if (active != n) return false;
    }
  }
  return true;
}

Measurement b_star_direct(int n, const Box& box, double beta, const PairPotential& p,
                          const McOptions& mc) {
  if (n < 1 || n > 3) fail_input("b_star_direct: n must be in 1..3");
  const int labels = n + 1;
  std::vector<PolymerSupport> subsets;
  for (std::uint32_t m = 1; m < (1U << labels); ++m) {
    if (std::popcount(m) < 2) continue;
    PolymerSupport s;
    for (int i = 0; i < labels; ++i) {
      if (m & (1U << i)) s.push_back(i + 1);
    }
    subsets.push_back(s);
  }
  std::vector<Measurement> w(static_cast<std::size_t>(labels) + 1);
  bool exact = true;
  for (int k = 2; k <= labels; ++k) {
    McOptions opt = mc;
    opt.seed = stream_seed(mc.seed, static_cast<std::uint64_t>(k));
    w[static_cast<std::size_t>(k)] = omega(WeightRequest{k, p, beta, box, std::nullopt}, opt);
    exact = exact && w[static_cast<std::size_t>(k)].method == Method::exact;
  }
  double sum = 0.0;
  double err = 0.0;
  const std::uint32_t families = 1U << subsets.size();
  for (std::uint32_t fam = 1; fam < families; ++fam) {
    MultiIndex I;
    std::uint32_t cover = 0;
    int edge_sum = 0;
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      if (!(fam & (1U << s))) continue;
      I[subsets[s]] = 1;
      edge_sum += static_cast<int>(subsets[s].size()) - 1;
      for (int l : subsets[s]) cover |= 1U << (l - 1);
    }
    if (edge_sum != n || cover != (1U << labels) - 1) continue;
    const Rational cI = cluster_coefficient(I);
    if (cI == 0) continue;
    const double c = static_cast<double>(cI);
    double prod = c;
    for (const auto& [supp, mult] : I) prod *= w[supp.size()].value;
    sum += prod;
    for (const auto& [supp, mult] : I) {
      double partial = std::abs(c) * w[supp.size()].error;
      for (const auto& [other, m2] : I) {
        if (&other != &supp) partial *= std::abs(w[other.size()].value);
      }
      err += partial;
    }
  }
  double scale = std::pow(box.volume(), n);
  for (int i = 2; i <= n; ++i) scale /= i;
  Measurement out{scale * sum, scale * err, exact ? Method::exact : Method::monte_carlo,
                  exact ? std::nullopt : std::optional<std::uint64_t>(mc.seed), 0, 1};
  return out;
}

}  // namespace cex
