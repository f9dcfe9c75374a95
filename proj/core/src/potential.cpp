#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>

#include "cex/config.hpp"
#include "cex/error.hpp"
#include "cex/potential.hpp"
#include "cex/random.hpp"

namespace cex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sphere_factor(int dim, double r) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi * r;
    case 3: return 4.0 * std::numbers::pi * r * r;
  }
  fail_input("dimension must be 1, 2 or 3");
}

void check_range(double range) {
  if (!(range > 0.0) || !std::isfinite(range)) {
    fail_input("potential range must be positive and finite (infinite-range potentials are not supported)");
  }
}

}  // namespace

std::string_view to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::ideal: return "ideal";
    case PotentialKind::hard_core: return "hard_core";
    case PotentialKind::square_well: return "square_well";
    case PotentialKind::tabulated: return "tabulated";
  }
  return "unknown";
}

PairPotential PairPotential::ideal() { return PairPotential{}; }

PairPotential PairPotential::hard_core(double range) {
  check_range(range);
  PairPotential p;
  p.kind_ = PotentialKind::hard_core;
  p.range_ = range;
  p.core_ = range;
  return p;
}

PairPotential PairPotential::square_well(double range, double depth, double core,
                                         double stability) {
  check_range(range);
  if (core < 0.0 || core >= range) fail_input("square well core must lie in [0, R)");
  PairPotential p;
  p.kind_ = PotentialKind::square_well;
  p.range_ = range;
  p.depth_ = depth;
  p.core_ = core;
  p.stability_ = stability >= 0.0 ? stability : std::max(depth, 0.0);
  return p;
}

PairPotential PairPotential::tabulated(std::vector<std::pair<double, double>> table,
                                       double range, double stability) {
  check_range(range);
  if (table.size() < 2) fail_input("tabulated potential needs at least two nodes");
  if (stability < 0.0) fail_input("tabulated potential needs a stability constant B >= 0");
  std::sort(table.begin(), table.end());
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i].first == table[i - 1].first) fail_input("duplicate radius in potential table");
  }
  if (table.front().first < 0.0) fail_input("negative radius in potential table");
  PairPotential p;
  p.kind_ = PotentialKind::tabulated;
  p.range_ = range;
  p.stability_ = stability;
  p.table_ = std::move(table);
  return p;
}

double PairPotential::eval_r(double r) const {
  if (r > range_) return 0.0;
  switch (kind_) {
    case PotentialKind::ideal: return 0.0;
    case PotentialKind::hard_core: return kInf;
    case PotentialKind::square_well: return r <= core_ ? kInf : -depth_;
    case PotentialKind::tabulated: {
      if (r <= table_.front().first) return table_.front().second;
      if (r >= table_.back().first) return table_.back().second;
      auto hi = std::upper_bound(table_.begin(), table_.end(), std::make_pair(r, kInf));
      auto lo = hi - 1;
      if (std::isinf(lo->second) || std::isinf(hi->second)) {
        return std::isinf(lo->second) ? lo->second : (r == lo->first ? lo->second : hi->second);
      }
      const double t = (r - lo->first) / (hi->first - lo->first);
      return lo->second + t * (hi->second - lo->second);
    }
  }
  return 0.0;
}

double PairPotential::eval(const double* x, int dim) const {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += x[k] * x[k];
  return eval_r(std::sqrt(s));
}

double PairPotential::mayer_r(double beta, double r) const {
  if (r > range_ || kind_ == PotentialKind::ideal) return 0.0;
  const double v = eval_r(r);
  if (v == kInf) return -1.0;
  return std::expm1(-beta * v);
}

double PairPotential::mayer(double beta, const double* x, int dim) const {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += x[k] * x[k];
  return mayer_r(beta, std::sqrt(s));
}

std::vector<double> PairPotential::breakpoints() const {
  std::vector<double> b{0.0};
  if (core_ > 0.0 && core_ < range_) b.push_back(core_);
  for (const auto& [r, v] : table_) {
    if (r > 0.0 && r < range_) b.push_back(r);
  }
  if (range_ > 0.0) b.push_back(range_);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double periodized_f(const PairPotential& p, double beta, const double* qi, const double* qj,
                    const Box& box) {
  if (box.bc != BoundaryCondition::periodic) fail_input("periodized_f requires periodic bc");
  if (!(box.ell > 2.0 * p.range())) {
    fail_input("periodized_f requires l > 2R (multi-image interaction not modelled)");
  }
  double x[3];
  box.displacement(qi, qj, x);
  return p.mayer(beta, x, box.dim);
}

double ball_volume(int dim, double radius) {
  switch (dim) {
    case 1: return 2.0 * radius;
    case 2: return std::numbers::pi * radius * radius;
    case 3: return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
  }
  fail_input("dimension must be 1, 2 or 3");
}

Measurement c_beta(const PairPotential& p, double beta, int dim) {
  if (dim < 1 || dim > 3) fail_input("dimension must be 1, 2 or 3");
  if (!(beta > 0.0)) fail_input("beta must be positive");
  if (p.kind() == PotentialKind::ideal) return Measurement::exact_value(0.0);
  if (p.kind() == PotentialKind::hard_core) return Measurement::exact_value(ball_volume(dim, p.range()));

  // The integrand depends on |x| only: integrate the radial profile panel by
  // panel, splitting at the potential's breakpoints.
  const auto knots = p.breakpoints();
  auto estimate = [&](int cells) {
    double total = 0.0;
    for (std::size_t k = 1; k < knots.size(); ++k) {
      const double a = knots[k - 1];
      const double h = (knots[k] - a) / cells;
      double panel = 0.0;
      for (int i = 0; i < cells; ++i) {
        const double r = a + (i + 0.5) * h;
        panel += std::abs(p.mayer_r(beta, r)) * sphere_factor(dim, r);
      }
      total += panel * h;
    }
    return total;
  };
  int cells = 16;
  double prev = estimate(cells);
  for (int iter = 0; iter < 20; ++iter) {
    cells *= 2;
    const double cur = estimate(cells);
    if (std::abs(cur - prev) < 1e-8) {
      return {cur, std::abs(cur - prev), Method::quadrature, {}, static_cast<std::uint64_t>(cells), 1};
    }
    prev = cur;
  }
  throw Error(ErrorKind::convergence, "c_beta quadrature did not converge");
}

double c_beta_cube_midpoint(const PairPotential& p, double beta, int dim, int cells) {
  if (dim < 1 || dim > 3) fail_input("dimension must be 1, 2 or 3");
  const double R = p.range();
  const double h = 2.0 * R / cells;
  double sum = 0.0;
  double x[3] = {0, 0, 0};
  const long total = static_cast<long>(std::pow(cells, dim));
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int k = 0; k < dim; ++k) {
      x[k] = -R + (static_cast<double>(rest % cells) + 0.5) * h;
      rest /= cells;
    }
    sum += std::abs(p.mayer(beta, x, dim));
  }
  return sum * std::pow(h, dim);
}

double total_energy(const PairPotential& p, const std::vector<double>& q, int dim,
                    const Box* box) {
  const std::size_t n = q.size() / static_cast<std::size_t>(dim);
  double h = 0.0;
  double x[3];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* qi = &q[i * static_cast<std::size_t>(dim)];
      const double* qj = &q[j * static_cast<std::size_t>(dim)];
      if (box) {
        box->displacement(qi, qj, x);
      } else {
        for (int k = 0; k < dim; ++k) x[k] = qj[k] - qi[k];
      }
      h += p.eval(x, dim);
    }
  }
  return h;
}

StabilityProbe stability_probe(const PairPotential& p, int dim, int n, std::uint64_t trials,
                               std::uint64_t seed) {
  if (n < 1 || n > 12) fail_input("stability_probe: n must be in 1..12");
  if (dim < 1 || dim > 3) fail_input("dimension must be 1, 2 or 3");
  StabilityProbe out;
  if (n == 1 || p.kind() == PotentialKind::ideal) return out;
  Rng rng(stream_seed(seed, 0));
  // Cube small enough that most particles sit within range of each other.
  const double side = std::max(p.range(), 1e-12) * std::pow(static_cast<double>(n), 1.0 / dim);
  std::vector<double> q(static_cast<std::size_t>(n * dim));
  double best = kInf;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (auto& x : q) x = side * uniform01(rng);
    const double h = total_energy(p, q, dim);
    if (!std::isfinite(h)) continue;
    ++out.finite_samples;
    best = std::min(best, h / n);
  }
  out.min_energy_per_particle = out.finite_samples ? best : 0.0;
  out.pass = out.min_energy_per_particle >= -p.stability() - 1e-12;
  return out;
}

std::vector<std::pair<double, double>> parse_table_csv(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail_input("table row needs 'r,value': " + line);
    std::string a = line.substr(0, comma);
    std::string b = line.substr(comma + 1);
    auto num = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      if (s == "inf" || s == "+inf") return kInf;
      return std::stod(s);
    };
    try {
      out.emplace_back(num(a), num(b));
    } catch (const std::invalid_argument&) {
      if (out.empty()) continue;  // header row
      fail_input("bad number in table row: " + line);
    }
  }
  return out;
}

PairPotential parse_potential(const std::string& text, const std::string& base_dir) {
  const auto cfg = KeyValueConfig::parse(text);
  auto key = [&](const std::string& k) {
    return cfg.has(k) ? k : "potential." + k;
  };
  const std::string kind = cfg.get_string(key("kind"), "");
  if (kind == "ideal") return PairPotential::ideal();
  if (kind == "hard_core" || kind == "hard-core" || kind == "hard_rod") {
    return PairPotential::hard_core(cfg.get_double(key("R"), 1.0));
  }
  if (kind == "square_well" || kind == "square-well") {
    return PairPotential::square_well(cfg.get_double(key("R"), 1.0),
                                      cfg.get_double(key("depth"), 1.0),
                                      cfg.get_double(key("core"), 0.0),
                                      cfg.get_double(key("B"), -1.0));
  }
  if (kind == "tabulated") {
    const auto path = cfg.get(key("table"));
    if (!path) fail_input("tabulated potential needs 'table = <csv path>'");
    std::filesystem::path full(*path);
    if (full.is_relative()) full = std::filesystem::path(base_dir) / full;
    return PairPotential::tabulated(parse_table_csv(read_file(full.string())),
                                    cfg.get_double(key("R"), 1.0),
                                    cfg.get_double(key("B"), -1.0));
  }
  fail_input("unknown potential kind '" + kind + "' (ideal|hard_core|square_well|tabulated)");
}

PairPotential load_potential(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_potential(read_file(path), dir.empty() ? "." : dir.string());
}

}  // namespace cex
