#include "cex/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "json.hpp"

#include "cex/alcove.hpp"
#include "cex/error.hpp"

namespace cex {

double SourceFunction::operator()(const double* q, const Box& box) const {
  double x[3];
  box.displacement(center.data(), q, x);
  double r2 = 0.0;
  for (int k = 0; k < box.dim; ++k) r2 += x[k] * x[k];
  return r2 <= eta * eta ? 1.0 : 0.0;
}

namespace {

void check_sources(const Box& box, const std::vector<SourceFunction>& sources) {
  for (const auto& s : sources) {
    if (static_cast<int>(s.center.size()) != box.dim) fail_input("source center has wrong dimension");
    if (!(s.eta > 0.0)) fail_input("source radius eta must be positive");
    if (box.bc == BoundaryCondition::zero) {
      std::vector<double> c = s.center;
      if (box.distance_to_boundary(c.data()) < s.eta) {
        fail_input("source ball must lie inside the box for zero bc");
      }
    } else if (!(2 * s.eta < box.ell)) {
      fail_input("source ball wraps onto itself");
    }
  }
}

double boltzmann(const PairPotential& p, double beta, const double* q, int n, int dim,
                 const Box& box) {
  double w = 1.0;
  double x[3];
  for (int i = 0; i < n && w != 0.0; ++i) {
    for (int j = i + 1; j < n; ++j) {
      box.displacement(q + i * dim, q + j * dim, x);
      const double v = p.eval(x, dim);
      if (std::isinf(v)) return 0.0;
      w *= std::exp(-beta * v);
    }
  }
  return w;
}

// Exact 1D integration over Lambda^n with some particles confined to source
// balls. `marked[k]` is the source of particle k, or -1.
struct ExactGrid {
  double u = 0.0;
  int cells = 0;
};

std::optional<ExactGrid> exact_grid(const Box& box, const PairPotential& p,
                                    const std::vector<SourceFunction>& sources) {
  if (box.dim != 1) return std::nullopt;
  if (p.kind() != PotentialKind::hard_core && p.kind() != PotentialKind::square_well) {
    return std::nullopt;
  }
  std::vector<double> lengths{box.ell, p.core()};
  for (const auto& s : sources) {
    lengths.push_back(s.eta);
    lengths.push_back(s.center[0] + box.ell / 2 - s.eta);
  }
  const auto m = commensurate_subdivision(p.range(), lengths);
  if (!m) return std::nullopt;
  ExactGrid g;
  g.u = p.range() / *m;
  g.cells = static_cast<int>(std::lround(box.ell / g.u));
  return g;
}

std::optional<double> exact_integral(const ExactGrid& g, const Box& box, int n,
                                     const std::vector<int>& marked,
                                     const std::vector<SourceFunction>& sources,
                                     const std::function<double(const double*)>& f) {
  std::vector<int> lo(static_cast<std::size_t>(n), 0), hi(static_cast<std::size_t>(n), g.cells);
  double measure = 1.0;
  for (int k = 0; k < n; ++k) {
    const int s = k < static_cast<int>(marked.size()) ? marked[static_cast<std::size_t>(k)] : -1;
    if (s < 0) {
      measure *= box.ell;
      continue;
    }
    const auto& src = sources[static_cast<std::size_t>(s)];
    lo[static_cast<std::size_t>(k)] =
        static_cast<int>(std::lround((src.center[0] + box.ell / 2 - src.eta) / g.u));
    hi[static_cast<std::size_t>(k)] =
        lo[static_cast<std::size_t>(k)] + static_cast<int>(std::lround(2 * src.eta / g.u));
    measure *= 2 * src.eta;
  }
  if (alcove_count(lo, hi) > kExactAlcoveBudget) return std::nullopt;
  std::vector<double> q(static_cast<std::size_t>(n));
  const double sum = alcove_integral(lo, hi, g.u, [&](const double* x) {
    for (int k = 0; k < n; ++k) q[static_cast<std::size_t>(k)] = x[k] - box.ell / 2;
    // Coordinates outside the box only occur for wrapped periodic balls.
    return f(q.data());
  });
  return sum / measure;
}

void sample_in_ball(const SourceFunction& s, const Box& box, Rng& rng, double* q) {
  for (;;) {
    double r2 = 0.0;
    for (int k = 0; k < box.dim; ++k) {
      const double x = s.eta * (2 * uniform01(rng) - 1);
      q[k] = s.center[static_cast<std::size_t>(k)] + x;
      r2 += x * x;
    }
    if (r2 <= s.eta * s.eta) break;
  }
  box.wrap(q);
}

// Mean of f over q with marked particles uniform in their balls and the rest
// uniform in Lambda.
Measurement ball_average(const Box& box, int n, const std::vector<int>& marked,
                         const std::vector<SourceFunction>& sources,
                         const std::function<double(const double*)>& f, const McOptions& mc,
                         std::uint64_t seed) {
  if (mc.samples == 0) fail_input("Monte Carlo budget is zero");
  const int dim = box.dim;
  const auto acc = run_streams(
      seed, mc.streams, mc.samples,
      [&](int, Rng& rng, std::uint64_t count, Welford& w) {
        std::vector<double> q(static_cast<std::size_t>(n * dim));
        for (std::uint64_t s = 0; s < count; ++s) {
          for (int k = 0; k < n; ++k) {
            double* qk = &q[static_cast<std::size_t>(k * dim)];
            const int src = k < static_cast<int>(marked.size()) ? marked[static_cast<std::size_t>(k)] : -1;
            if (src >= 0) {
              sample_in_ball(sources[static_cast<std::size_t>(src)], box, rng, qk);
            } else {
              for (int c = 0; c < dim; ++c) qk[c] = box.ell * (uniform01(rng) - 0.5);
            }
          }
          w.add(f(q.data()));
        }
      },
      mc.workers);
  return {acc.mean(), acc.std_error(), Method::monte_carlo, seed, acc.count(), mc.streams};
}

Measurement scaled(Measurement m, double s) {
  m.value *= s;
  m.error *= std::abs(s);
  return m;
}

}  // namespace

std::string PsiCoefficients::json() const {
  auto entry = [](const Measurement& m) {
    return nlohmann::json{{"value", m.value}, {"stderr", m.error}};
  };
  nlohmann::json j{{"c00", entry(c00)}, {"c10", entry(c10)}, {"c01", entry(c01)},
                   {"c11", entry(c11)}, {"method", std::string(to_string(method))}};
  return j.dump();
}

PsiCoefficients psi_coefficients(const PsiRequest& req, const McOptions& mc) {
  const Box& box = req.box;
  const int N = req.N;
  if (req.sources.empty() || req.sources.size() > 2) fail_input("Psi needs one or two sources");
  if (N < static_cast<int>(req.sources.size())) fail_input("more sources than particles");
  if (box.bc == BoundaryCondition::periodic && !(box.ell > 2 * req.potential.range())) {
    fail_input("periodic box needs l > 2R");
  }
  check_sources(box, req.sources);
  const bool two = req.sources.size() == 2;

  PsiCoefficients out;
  out.volume = box.volume();
  out.ball1 = req.sources[0].volume(box.dim);
  out.ball2 = two ? req.sources[1].volume(box.dim) : 0.0;
  const double V = out.volume;

  auto finish = [&] {
    out.c10 = scaled(out.m10, out.ball1 / V);
    out.c01 = scaled(out.m01, out.ball2 / V);
    out.c11 = scaled(out.m11, out.ball1 * out.ball2 / (V * V));
    return out;
  };

  if (req.potential.kind() == PotentialKind::ideal || N == 1) {
    out.method = Method::exact;
    out.c00 = out.m10 = Measurement::exact_value(1.0);
    out.m01 = out.m11 = Measurement::exact_value(two ? 1.0 : 0.0);
    return finish();
  }

  auto f = [&](const double* q) { return boltzmann(req.potential, req.beta, q, N, box.dim, box); };
  const std::vector<std::vector<int>> marks{{}, {0}, {-1, 1}, {0, 1}};

  if (!mc.force_mc) {
    if (const auto g = exact_grid(box, req.potential, req.sources)) {
      std::vector<std::optional<double>> v;
      for (std::size_t k = 0; k < marks.size(); ++k) {
        if (!two && k >= 2) {
          v.emplace_back(0.0);
          continue;
        }
        v.push_back(exact_integral(*g, box, N, marks[k], req.sources, f));
        if (!v.back()) break;
      }
      if (v.size() == 4 && std::all_of(v.begin(), v.end(), [](const auto& x) { return x.has_value(); })) {
        out.method = Method::exact;
        out.c00 = Measurement::exact_value(*v[0]);
        out.m10 = Measurement::exact_value(*v[1]);
        out.m01 = Measurement::exact_value(*v[2]);
        out.m11 = Measurement::exact_value(*v[3]);
        return finish();
      }
    }
  }

  out.method = Method::monte_carlo;
  out.c00 = ball_average(box, N, marks[0], req.sources, f, mc, stream_seed(mc.seed, 100));
  out.m10 = ball_average(box, N, marks[1], req.sources, f, mc, stream_seed(mc.seed, 101));
  if (two) {
    out.m01 = ball_average(box, N, marks[2], req.sources, f, mc, stream_seed(mc.seed, 102));
    out.m11 = ball_average(box, N, marks[3], req.sources, f, mc, stream_seed(mc.seed, 103));
  } else {
    out.m01 = out.m11 = Measurement::exact_value(0.0);
  }
  return finish();
}

Measurement psi_bruteforce(const PsiRequest& req, double a1, double a2, const McOptions& mc) {
  const Box& box = req.box;
  const int N = req.N;
  if (req.sources.empty() || req.sources.size() > 2) fail_input("Psi needs one or two sources");
  check_sources(box, req.sources);
  const bool two = req.sources.size() == 2;
  for (std::size_t k = 0; k < req.sources.size(); ++k) {
    if (!(1 + (k ? a2 : a1) > 0)) fail_input("need 1 + a_i h_i > 0");
  }
  const int dim = box.dim;
  auto f = [&](const double* q) {
    double w = 1.0 + a1 * req.sources[0](q, box);
    if (two) w *= 1.0 + a2 * req.sources[1](q + dim, box);
    if (req.potential.kind() == PotentialKind::ideal) return w;
    return w * boltzmann(req.potential, req.beta, q, N, dim, box);
  };
  if (!mc.force_mc) {
    if (const auto g = exact_grid(box, req.potential, req.sources)) {
      if (const auto v = exact_integral(*g, box, N, {}, req.sources, f)) {
        return Measurement::exact_value(*v);
      }
    }
  }
  return ball_average(box, N, {}, req.sources, f, mc, stream_seed(mc.seed, 200));
}

DerivativeEstimate one_point_from_psi(const PsiRequest& req, const McOptions& mc, double step) {
  const auto c = psi_coefficients(req, mc);
  DerivativeEstimate out;
  out.step = step;
  const double A = c.c00.value;
  const double m = c.m10.value;
  out.value.method = c.method;
  out.value.seed = c.method == Method::monte_carlo ? std::optional<std::uint64_t>(mc.seed) : std::nullopt;
  out.value.samples = c.c00.samples + c.m10.samples;
  out.value.value = m / A;
  out.value.error = std::abs(m / A) * std::hypot(c.m10.error / m, c.c00.error / A);
  const double lp = std::log1p(step * c.c10.value / A);
  const double lm = std::log1p(-step * c.c10.value / A);
  out.finite_difference = c.volume * (lp - lm) / (2 * step) / c.ball1;
  out.flagged = std::abs(out.finite_difference - out.value.value) >
                1e-6 * std::max(1.0, std::abs(out.value.value)) + 3 * out.value.error;
  return out;
}

DerivativeEstimate truncated_two_point(const PsiRequest& req, const McOptions& mc, double step) {
  if (req.sources.size() != 2) fail_input("truncated two-point function needs two sources");
  const auto c = psi_coefficients(req, mc);
  DerivativeEstimate out;
  out.step = step;
  const double A = c.c00.value;
  const double m1 = c.m10.value, m2 = c.m01.value, m12 = c.m11.value;
  out.value.method = c.method;
  out.value.seed = c.method == Method::monte_carlo ? std::optional<std::uint64_t>(mc.seed) : std::nullopt;
  out.value.samples = c.c00.samples + c.m10.samples + c.m01.samples + c.m11.samples;
  out.value.value = m12 / A - m1 * m2 / (A * A);
  // Delta method; the four averages are independent estimates.
  const double dA = -m12 / (A * A) + 2 * m1 * m2 / (A * A * A);
  out.value.error = std::sqrt(std::pow(c.m11.error / A, 2) + std::pow(c.m10.error * m2 / (A * A), 2) +
                              std::pow(c.m01.error * m1 / (A * A), 2) + std::pow(c.c00.error * dA, 2));
  auto L = [&](double a1, double a2) {
    return std::log1p((a1 * c.c10.value + a2 * c.c01.value + a1 * a2 * c.c11.value) / A);
  };
  const double mixed = (L(step, step) - L(step, -step) - L(-step, step) + L(-step, -step)) /
                       (4 * step * step);
  out.finite_difference = c.volume * c.volume * mixed / (c.ball1 * c.ball2);
  out.flagged = std::abs(out.finite_difference - out.value.value) >
                1e-4 * std::max(1.0, std::abs(out.value.value)) + 3 * out.value.error;
  return out;
}

double extrapolate_to_zero(const std::vector<double>& eta, const std::vector<double>& values) {
  if (eta.empty() || eta.size() != values.size()) fail_input("extrapolation needs matching, nonempty lists");
  std::vector<double> p = values;
  const std::size_t n = p.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      const double d = eta[i] - eta[i + k];
      if (d == 0.0) fail_input("extrapolation needs distinct eta values");
      // Neville step evaluated at eta = 0.
      p[i] = (eta[i] * p[i + 1] - eta[i + k] * p[i]) / d;
    }
  }
  return p[0];
}

Measurement augmented_activity(int v_size, const std::vector<int>& A,
                               const std::vector<SourceFunction>& sources, const PairPotential& p,
                               double beta, const Box& box, const McOptions& mc) {
  if (A.size() > 2) fail_input("marker set has at most two elements");
  if (static_cast<int>(A.size()) > v_size) fail_input("marker set larger than the polymer");
  std::vector<int> marked;
  for (int a : A) {
    if (a != 1 && a != 2) fail_input("markers are 1 and 2");
    if (a > static_cast<int>(sources.size())) fail_input("missing source for marker");
    if (std::count(A.begin(), A.end(), a) > 1) fail_input("repeated marker");
    marked.push_back(a - 1);
  }
  check_sources(box, sources);
  const double V = box.volume();
  if (v_size == 1) {
    if (A.size() != 1) fail_input("singleton polymers must carry one marker");
    return Measurement::exact_value(sources[static_cast<std::size_t>(marked[0])].volume(box.dim) / V);
  }
  if (A.empty()) {
    WeightRequest w{v_size, p, beta, box, std::nullopt};
    return omega(w, mc);
  }
  if (v_size > kEnumerationCap) fail_cap("augmented_activity: |V| exceeds the graph cap");
  if (p.kind() == PotentialKind::ideal) return Measurement::exact_value(0.0);
  double factor = 1.0;
  for (int s : marked) factor *= sources[static_cast<std::size_t>(s)].volume(box.dim) / V;
  auto f = [&](const double* q) { return ursell(p, beta, q, v_size, box.dim, &box); };
  if (!mc.force_mc) {
    if (const auto g = exact_grid(box, p, sources)) {
      if (const auto v = exact_integral(*g, box, v_size, marked, sources, f)) {
        return Measurement::exact_value(*v * factor);
      }
    }
  }
  return scaled(ball_average(box, v_size, marked, sources, f, mc, stream_seed(mc.seed, 300)), factor);
}

Resummation geometric_resummation(const Rational& x, int K) {
  if (K < 0 || K + 1 > kConnectedSumCap) fail_cap("resummation order exceeds the connected-sum cap");
  if (x >= 1 || x <= -1) fail_input("resummation needs |x| < 1");
  // Two incompatible polymers stand in for the marked pair and {1,2}.
  const PolymerSupport marked{1, 2, 3};
  const PolymerSupport pair{1, 2};
  Resummation r;
  r.signs_ok = true;
  Rational power = 1;
  for (int n = 0; n <= K; ++n) {
    MultiIndex I{{marked, 1}};
    if (n > 0) I[pair] = n;
    const Rational c = cluster_coefficient(I);
    if (c != (n % 2 ? -1 : 1)) r.signs_ok = false;
    r.partial += c * power;
    power *= -x;
  }
  r.closed = Rational(1) / (1 - x);
  r.remainder = r.closed - r.partial;
  Rational tail = 1;
  for (int n = 0; n <= K; ++n) tail *= x;
  r.exact_match = r.remainder == tail / (1 - x);
  return r;
}

std::string DecayProfile::csv() const {
  std::string out = "r,truncated,stderr,envelope,pass\n";
  char line[160];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%d\n", row.r, row.truncated,
                  row.error, row.envelope, row.pass ? 1 : 0);
    out += line;
  }
  return out;
}

DecayProfile decay_profile(const GibbsConfig& cfg, const std::vector<double>& separations,
                           double bin_width, int blocks) {
  if (!(bin_width > 0)) fail_input("bin width must be positive");
  const double R = cfg.potential.range();
  if (!(R > 0)) fail_input("decay profile needs a potential with positive range");
  const int nbins = static_cast<int>(std::floor(cfg.box.ell / 2 / bin_width + 1e-9));
  if (nbins < 1) fail_input("bin width larger than l/2");
  const auto table = correlation_estimate(cfg, CorrelationKind::truncated_labelled, nbins,
                                          nbins * bin_width, blocks);
  DecayProfile out;
  out.acceptance = table.acceptance;
  out.snapshots = table.snapshots;
  const double V = cfg.box.volume();
  out.C = c_beta(cfg.potential, cfg.beta, cfg.box.dim).value;
  const double CV = out.C / V;
  auto mid = [](const Bin& b) { return 0.5 * (b.lo + b.hi); };

  double far = 0.0;
  for (const auto& b : table.bins) {
    if (b.lo >= 8 * R - 1e-9) far = std::max(far, std::abs(b.value));
  }
  out.C2 = CV > 0 ? far / CV : 0.0;
  for (const auto& b : table.bins) {
    if (b.lo >= R - 1e-9 && b.hi <= 2 * R + 1e-9) {
      out.C3 = std::max(out.C3, (std::abs(b.value) - out.C2 * CV) * std::exp(mid(b) / R));
    }
  }

  auto envelope = [&](double r) {
    return (r <= R ? 1.0 / (1.0 - CV) : 0.0) + out.C2 * CV + out.C3 * std::exp(-r / R);
  };
  for (double r : separations) {
    const int k = std::min(nbins - 1, static_cast<int>(r / bin_width));
    if (k < 0) fail_input("separations must be non-negative");
    const auto& b = table.bins[static_cast<std::size_t>(k)];
    DecayRow row;
    row.r = r;
    row.truncated = b.value;
    row.error = b.error;
    row.envelope = envelope(r);
    row.pass = std::abs(b.value) <= row.envelope + 3 * b.error;
    row.flagged = b.flagged;
    out.rows.push_back(row);
  }

  // Weighted least squares for P + A e^{-kappa r}, kappa profiled on a log grid.
  std::vector<double> rs, ys, ws;
  for (const auto& b : table.bins) {
    const double r = mid(b);
    if (r >= 2 * R && r <= 8 * R && b.error > 0) {
      rs.push_back(r);
      ys.push_back(b.value);
      ws.push_back(1.0 / (b.error * b.error));
    }
  }
  if (rs.size() >= 3) {
    double best = HUGE_VAL;
    for (int g = 0; g <= 400; ++g) {
      const double kappa = 0.05 / R * std::pow(400.0, g / 400.0);
      double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const double e = std::exp(-kappa * (rs[i] - 2 * R));
        s11 += ws[i];
        s12 += ws[i] * e;
        s22 += ws[i] * e * e;
        t1 += ws[i] * ys[i];
        t2 += ws[i] * e * ys[i];
      }
      const double det = s11 * s22 - s12 * s12;
      if (!(det > 0)) continue;
      const double P = (s22 * t1 - s12 * t2) / det;
      const double A = (s11 * t2 - s12 * t1) / det;
      double chi2 = 0;
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const double res = ys[i] - P - A * std::exp(-kappa * (rs[i] - 2 * R));
        chi2 += ws[i] * res * res;
      }
      if (chi2 < best) {
        best = chi2;
        out.rate = kappa;
        out.plateau = P;
        // Amplitude at r = 2R.
        out.amplitude = A;
        out.rate_resolved = std::abs(A) > 2 * std::sqrt(s11 / det);
      }
    }
  }
  return out;
}

}  // namespace cex
