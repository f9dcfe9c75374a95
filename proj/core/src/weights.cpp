#include "cex/weights.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include "cex/alcove.hpp"
#include "cex/error.hpp"
#include "cex/graph.hpp"
#include "cex/random.hpp"

namespace cex {

namespace {

// table[mask] = sum over graphs g of the class with E(g) a subset of mask of
// (-1)^{|E(g)|}: the graph sum when f = -1 on `mask` and 0 elsewhere.
std::vector<std::int64_t> subset_sign_table(int n, const std::vector<LabeledGraph>& graphs) {
  const int pairs = n * (n - 1) / 2;
  std::vector<std::int64_t> t(std::size_t{1} << pairs, 0);
  for (const auto& g : graphs) t[g.mask()] += (g.edge_count() % 2 ? -1 : 1);
  for (int b = 0; b < pairs; ++b) {
    for (std::size_t m = 0; m < t.size(); ++m) {
      if (m & (std::size_t{1} << b)) t[m] += t[m ^ (std::size_t{1} << b)];
    }
  }
  return t;
}

struct GraphTables {
  std::array<std::vector<std::int64_t>, kEnumerationCap + 1> connected;
  std::array<std::vector<std::int64_t>, kEnumerationCap + 1> biconnected;
  std::array<std::vector<LabeledGraph>, kEnumerationCap + 1> biconnected_list;
};

const GraphTables& tables() {
  static const GraphTables t = [] {
    GraphTables g;
    for (int n = 1; n <= kEnumerationCap; ++n) {
      g.connected[static_cast<std::size_t>(n)] = subset_sign_table(n, enumerate_connected(n));
      if (n >= 2) {
        auto list = enumerate_biconnected(n);
        g.biconnected[static_cast<std::size_t>(n)] = subset_sign_table(n, list);
        g.biconnected_list[static_cast<std::size_t>(n)] = std::move(list);
      }
    }
    return g;
  }();
  return t;
}

void pair_displacement(const double* qi, const double* qj, int dim, const Box* box, double* x) {
  if (box) {
    box->displacement(qi, qj, x);
  } else {
    for (int k = 0; k < dim; ++k) x[k] = qj[k] - qi[k];
  }
}

// Overlap mask (bit per pair in lexicographic order) for f in {0, -1}.
std::uint64_t overlap_mask(const PairPotential& p, double beta, const double* q, int n, int dim,
                           const Box* box) {
  std::uint64_t mask = 0;
  int bit = 0;
  double x[3];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++bit) {
      pair_displacement(q + i * dim, q + j * dim, dim, box, x);
      if (p.mayer(beta, x, dim) != 0.0) mask |= std::uint64_t{1} << bit;
    }
  }
  return mask;
}

std::vector<std::vector<double>> mayer_matrix(const PairPotential& p, double beta, const double* q,
                                              int n, int dim, const Box* box) {
  std::vector<std::vector<double>> w(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  double x[3];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      pair_displacement(q + i * dim, q + j * dim, dim, box, x);
      const double f = p.mayer(beta, x, dim);
      w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f;
      w[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = f;
    }
  }
  return w;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool piecewise_constant(const PairPotential& p) {
  return p.kind() == PotentialKind::hard_core || p.kind() == PotentialKind::square_well;
}

void check_dim(int dim) {
  if (dim < 1 || dim > 3) fail_input("dimension must be 1, 2 or 3");
}

}  // namespace

double ursell(const PairPotential& p, double beta, const double* q, int n, int dim,
              const Box* box) {
  if (n == 1) return 1.0;
  if (p.is_hard_core_like() && n <= kEnumerationCap) {
    return static_cast<double>(
        tables().connected[static_cast<std::size_t>(n)][overlap_mask(p, beta, q, n, dim, box)]);
  }
  return connected_sum(mayer_matrix(p, beta, q, n, dim, box));
}

double biconnected_sum(const PairPotential& p, double beta, const double* q, int n, int dim) {
  if (n < 2 || n > kEnumerationCap) fail_cap("biconnected_sum: n outside 2..6");
  const auto& t = tables();
  if (p.is_hard_core_like()) {
    return static_cast<double>(
        t.biconnected[static_cast<std::size_t>(n)][overlap_mask(p, beta, q, n, dim, nullptr)]);
  }
  const auto w = mayer_matrix(p, beta, q, n, dim, nullptr);
  std::vector<double> f;
  std::uint64_t nonzero = 0;
  int bit = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++bit) {
      f.push_back(w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      if (f.back() != 0.0) nonzero |= std::uint64_t{1} << bit;
    }
  }
  double sum = 0.0;
  for (const auto& g : t.biconnected_list[static_cast<std::size_t>(n)]) {
    std::uint64_t m = g.mask();
    if (m & ~nonzero) continue;
    double prod = 1.0;
    for (; m; m &= m - 1) prod *= f[static_cast<std::size_t>(std::countr_zero(m))];
    sum += prod;
  }
  return sum;
}

double root_colour(const Box& box, const double* q, double range, int size, int epsilon) {
  const bool near = box.distance_to_boundary(q) < range * size;
  return epsilon == 0 ? (near ? 1.0 : 0.0) : (near ? 0.0 : 1.0);
}

Measurement omega(const WeightRequest& req, const McOptions& mc) {
  const int n = req.n;
  const int dim = req.box.dim;
  check_dim(dim);
  if (n < 2) fail_input("omega: polymer cardinality must be >= 2");
  if (n > kEnumerationCap) {
    fail_cap("omega: n = " + std::to_string(n) + " exceeds the graph cap of " +
             std::to_string(kEnumerationCap));
  }
  if (req.rooted) {
    if (req.rooted->root < 0 || req.rooted->root >= n) fail_input("omega: root outside V");
    if (req.rooted->epsilon != 0 && req.rooted->epsilon != 1) fail_input("omega: epsilon must be 0 or 1");
  }
  if (req.box.bc == BoundaryCondition::periodic && !(req.box.ell > 2 * req.potential.range())) {
    fail_input("omega: periodic box needs l > 2R");
  }
  if (req.potential.kind() == PotentialKind::ideal) return Measurement::exact_value(0.0);

  const PairPotential& p = req.potential;
  const Box& box = req.box;
  const double ell = box.ell;
  const double R = p.range();
  auto integrand = [&](const double* q) {
    double v = ursell(p, req.beta, q, n, dim, &box);
    if (req.rooted && v != 0.0) {
      v *= root_colour(box, q + req.rooted->root * dim, R, n, req.rooted->epsilon) / n;
    }
    return v;
  };

  if (dim == 1 && n <= 4 && !mc.force_mc && piecewise_constant(p)) {
    const auto m = commensurate_subdivision(R, {ell, p.core()});
    if (m) {
      const double u = R / *m;
      const int cells = static_cast<int>(std::lround(ell / u));
      const bool reduce = box.bc == BoundaryCondition::periodic && !req.rooted;
      const int vars = reduce ? n - 1 : n;
      if (alcove_count(vars, cells) <= kExactAlcoveBudget) {
        std::vector<double> q(static_cast<std::size_t>(n), -ell / 2);
        double integral;
        if (reduce) {
          // Translation invariance on the torus: pin particle 1.
          integral = ell * alcove_integral(vars, u, cells, [&](const double* y) {
            for (int i = 1; i < n; ++i) q[static_cast<std::size_t>(i)] = y[i - 1] - ell / 2;
            return integrand(q.data());
          });
        } else {
          integral = alcove_integral(vars, u, cells, [&](const double* y) {
            for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = y[i] - ell / 2;
            return integrand(q.data());
          });
        }
        return Measurement::exact_value(integral / std::pow(ell, n));
      }
    }
  }

  if (mc.samples == 0) fail_input("omega: Monte Carlo budget is zero");
  if (mc.shift != 0.0 && box.bc != BoundaryCondition::periodic) {
    fail_input("omega: sample shift only makes sense for periodic bc");
  }
  const auto acc = run_streams(
      mc.seed, mc.streams, mc.samples,
      [&](int, Rng& rng, std::uint64_t count, Welford& w) {
        std::vector<double> q(static_cast<std::size_t>(n * dim));
        for (std::uint64_t s = 0; s < count; ++s) {
          for (auto& x : q) x = ell * (uniform01(rng) - 0.5);
          if (mc.shift != 0.0) {
            for (int i = 0; i < n; ++i) {
              for (int k = 0; k < dim; ++k) q[static_cast<std::size_t>(i * dim + k)] += mc.shift;
              box.wrap(&q[static_cast<std::size_t>(i * dim)]);
            }
          }
          w.add(integrand(q.data()));
        }
      },
      mc.workers);
  return {acc.mean(), acc.std_error(), Method::monte_carlo, mc.seed, acc.count(), mc.streams};
}

Measurement mayer_integral(const PairPotential& p, double beta, int dim) {
  check_dim(dim);
  switch (p.kind()) {
    case PotentialKind::ideal: return Measurement::exact_value(0.0);
    case PotentialKind::hard_core: return Measurement::exact_value(-ball_volume(dim, p.range()));
    case PotentialKind::square_well: {
      const double core = p.core() > 0 ? ball_volume(dim, p.core()) : 0.0;
      const double shell = ball_volume(dim, p.range()) - core;
      return Measurement::exact_value(-core + std::expm1(beta * p.depth()) * shell);
    }
    case PotentialKind::tabulated: break;
  }
  const auto knots = p.breakpoints();
  auto estimate = [&](int cells) {
    double total = 0.0;
    for (std::size_t k = 1; k < knots.size(); ++k) {
      const double a = knots[k - 1];
      const double h = (knots[k] - a) / cells;
      for (int i = 0; i < cells; ++i) {
        const double r = a + (i + 0.5) * h;
        const double shell = dim == 1 ? 2.0 : dim == 2 ? 2 * std::numbers::pi * r
                                                       : 4 * std::numbers::pi * r * r;
        total += p.mayer_r(beta, r) * shell * h;
      }
    }
    return total;
  };
  int cells = 16;
  double prev = estimate(cells);
  for (int iter = 0; iter < 20; ++iter) {
    cells *= 2;
    const double cur = estimate(cells);
    if (std::abs(cur - prev) < 1e-10) {
      return {cur, std::abs(cur - prev), Method::quadrature, {}, static_cast<std::uint64_t>(cells), 1};
    }
    prev = cur;
  }
  throw Error(ErrorKind::convergence, "Mayer integral quadrature did not converge");
}

Measurement beta_n(int n, const PairPotential& p, double beta, int dim, const McOptions& mc) {
  check_dim(dim);
  if (n < 1) fail_input("beta_n: order must be >= 1");
  if (n + 1 > kEnumerationCap) {
    fail_cap("beta_n: n + 1 = " + std::to_string(n + 1) + " exceeds the biconnected cap of " +
             std::to_string(kEnumerationCap));
  }
  if (p.kind() == PotentialKind::ideal) return Measurement::exact_value(0.0);
  const double R = p.range();
  const double half = n * R;

  if (dim == 1 && n <= 3 && !mc.force_mc && piecewise_constant(p)) {
    const auto m = commensurate_subdivision(R, {p.core()});
    if (m) {
      const double u = R / *m;
      const int cells = 2 * n * *m;
      std::vector<double> q(static_cast<std::size_t>(n + 1), 0.0);
      const double integral = alcove_integral(n, u, cells, [&](const double* y) {
        for (int i = 1; i <= n; ++i) q[static_cast<std::size_t>(i)] = y[i - 1] - half;
        return biconnected_sum(p, beta, q.data(), n + 1, 1);
      });
      return Measurement::exact_value(integral / factorial(n));
    }
  }

  if (mc.samples == 0) fail_input("beta_n: Monte Carlo budget is zero");
  const double weight = std::pow(2 * half, dim * n) / factorial(n);
  const auto acc = run_streams(
      mc.seed, mc.streams, mc.samples,
      [&](int, Rng& rng, std::uint64_t count, Welford& w) {
        std::vector<double> q(static_cast<std::size_t>((n + 1) * dim), 0.0);
        for (std::uint64_t s = 0; s < count; ++s) {
          for (std::size_t k = static_cast<std::size_t>(dim); k < q.size(); ++k) {
            q[k] = 2 * half * (uniform01(rng) - 0.5);
          }
          w.add(biconnected_sum(p, beta, q.data(), n + 1, dim));
        }
      },
      mc.workers);
  return {weight * acc.mean(), weight * acc.std_error(), Method::monte_carlo, mc.seed,
          acc.count(), mc.streams};
}

TreeGraphReport tree_graph_bound_check(int n, const PairPotential& p, double beta, int dim,
                                       std::uint64_t configs, std::uint64_t seed) {
  check_dim(dim);
  if (n < 2 || n > kEnumerationCap) fail_input("tree_graph_bound_check: n must be in 2..6");
  const auto connected = enumerate_connected(n);
  const auto trees = enumerate_trees(n);
  TreeGraphReport rep;
  rep.n = n;
  rep.configs = configs;
  rep.stability_factor = std::exp(2 * beta * p.stability() * n);
  Rng rng(stream_seed(seed, 0));
  // Particles packed so that most pairs are within range.
  const double side = std::max(p.range(), 1.0) * std::pow(static_cast<double>(n), 1.0 / dim);
  std::vector<double> q(static_cast<std::size_t>(n * dim));
  std::vector<double> f(static_cast<std::size_t>(n * (n - 1) / 2));
  for (std::uint64_t c = 0; c < configs; ++c) {
    for (auto& x : q) x = side * uniform01(rng);
    const auto w = mayer_matrix(p, beta, q.data(), n, dim, nullptr);
    int bit = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        f[static_cast<std::size_t>(bit++)] = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    auto product = [&](std::uint64_t m, bool absolute) {
      double prod = 1.0;
      for (; m; m &= m - 1) {
        const double v = f[static_cast<std::size_t>(std::countr_zero(m))];
        prod *= absolute ? std::abs(v) : v;
      }
      return prod;
    };
    double lhs = 0.0;
    for (const auto& g : connected) lhs += product(g.mask(), false);
    double rhs = 0.0;
    for (const auto& t : trees) rhs += product(t.mask(), true);
    rhs *= rep.stability_factor;
    lhs = std::abs(lhs);
    if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    if (lhs > rhs * (1 + 1e-12) + 1e-300) ++rep.violations;
  }
  return rep;
}

double activity_bound(int n, const PairPotential& p, double beta, const Box& box, double a,
                      bool rooted, int epsilon) {
  if (n < 2) fail_input("activity_bound: n must be >= 2");
  const double C = c_beta(p, beta, box.dim).value;
  double b = std::exp((2 * beta * p.stability() + a) * n) * std::pow(n, n - 2) *
             std::pow(C / box.volume(), n - 1);
  if (rooted && epsilon == 0) b *= 2.0 * box.dim * p.range() / box.ell;
  return b;
}

}  // namespace cex
