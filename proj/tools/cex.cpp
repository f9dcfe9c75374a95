// cex: batch front-end over the cluster-expansion library.
//
// Every subcommand reads an optional `--config` file (key = value, [sections]),
// lets flags override it, and stamps its output with the tool version, a hash
// of the merged configuration and the seed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cex/config.hpp"
#include "cex/correlations.hpp"
#include "cex/error.hpp"
#include "cex/expansion.hpp"
#include "cex/graph.hpp"
#include "cex/oracle.hpp"
#include "cex/potential.hpp"
#include "cex/report.hpp"
#include "cex/weights.hpp"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kRuntime = 1, kInput = 2, kConvergence = 3 };

// Flags are collected as strings and merged over the config file, so a run is
// fully described by one flat key/value map.
struct Command {
  std::string name;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> flags;
  std::string config_path;

  void flag(const std::string& key, const std::string& help) {
    app->add_option("--" + key, flags[key], help);
  }
};

struct Run {
  cex::KeyValueConfig cfg;
  std::string base_dir = ".";
  cex::RunInfo info;

  std::string str(const std::string& k, const std::string& d) const { return cfg.get_string(k, d); }
  double num(const std::string& k, double d) const { return cfg.get_double(k, d); }
  long long integer(const std::string& k, long long d) const { return cfg.get_int(k, d); }
  bool flag(const std::string& k) const {
    const auto v = cfg.get_string(k, "false");
    return v == "1" || v == "true" || v == "yes" || v == "on";
  }
  std::vector<double> list(const std::string& k, std::vector<double> d) const {
    return cfg.has(k) ? cfg.get_doubles(k) : d;
  }
};

Run merge(const Command& cmd) {
  Run run;
  if (!cmd.config_path.empty()) {
    if (!std::filesystem::exists(cmd.config_path)) {
      cex::fail_input("config file '" + cmd.config_path + "' does not exist");
    }
    run.cfg = cex::KeyValueConfig::load(cmd.config_path);
    const auto dir = std::filesystem::path(cmd.config_path).parent_path();
    if (!dir.empty()) run.base_dir = dir.string();
  }
  for (const auto& [k, v] : cmd.flags) {
    if (cmd.app->count("--" + k) > 0) run.cfg.set(k, v);
  }
  run.info.command = cmd.name;
  // Output location and worker count do not change results.
  auto hashed = run.cfg;
  cex::KeyValueConfig canonical;
  for (const auto& [k, v] : hashed.values()) {
    if (k != "out") canonical.set(k, v);
  }
  run.info.config_hash = cex::fnv1a_hex(canonical.canonical());
  run.info.workers = static_cast<int>(run.integer("workers", 1));
  return run;
}

cex::PairPotential potential_of(const Run& run) {
  if (const auto path = run.cfg.get("potential")) {
    std::filesystem::path full(*path);
    if (full.is_relative() && !std::filesystem::exists(full)) full = std::filesystem::path(run.base_dir) / full;
    if (!std::filesystem::exists(full)) cex::fail_input("potential file '" + *path + "' does not exist");
    return cex::load_potential(full.string());
  }
  std::string text;
  for (const auto& [k, v] : run.cfg.values()) {
    if (k.rfind("potential.", 0) == 0) text += k + " = " + v + "\n";
  }
  if (text.empty()) return cex::PairPotential::hard_core(1.0);
  return cex::parse_potential(text, run.base_dir);
}

cex::McOptions mc_of(const Run& run, std::uint64_t default_samples = 1'000'000) {
  cex::McOptions mc;
  mc.samples = static_cast<std::uint64_t>(run.integer("samples", static_cast<long long>(default_samples)));
  mc.seed = static_cast<std::uint64_t>(run.integer("seed", 1));
  mc.workers = run.info.workers;
  mc.streams = std::max(1, run.info.workers);
  mc.force_mc = run.flag("mc");
  return mc;
}

void emit(const Run& run, const std::string& body) {
  const auto out = run.str("out", "-");
  if (out == "-") {
    std::cout << body;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw cex::Error(cex::ErrorKind::runtime, "cannot write '" + out + "'");
  f << body;
}

void emit_json(const Run& run, json result) {
  json j{{"run", {{"tool", "cex"},
                  {"version", cex::version()},
                  {"command", run.info.command},
                  {"config_hash", run.info.config_hash},
                  {"workers", run.info.workers}}},
         {"config", run.cfg.values()},
         {"result", std::move(result)}};
  j["run"]["seed"] = run.info.seed ? json(*run.info.seed) : json(nullptr);
  emit(run, j.dump(2) + "\n");
}

json number(double v) { return std::isfinite(v) ? json(v) : json(cex::format_double(v)); }

json measurement(const cex::Measurement& m) {
  json j{{"value", number(m.value)},
         {"stderr", number(m.error)},
         {"method", std::string(cex::to_string(m.method))},
         {"samples", m.samples}};
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  return j;
}

cex::Box box_of(const Run& run, double ell) {
  return cex::Box(ell, static_cast<int>(run.integer("dim", 1)), cex::parse_bc(run.str("bc", "periodic")));
}

cex::GibbsConfig gibbs_of(const Run& run) {
  cex::GibbsConfig g;
  g.N = static_cast<int>(run.integer("N", 2));
  g.box = box_of(run, run.num("ell", 10.0));
  g.potential = potential_of(run);
  g.beta = run.num("beta", 1.0);
  g.sweeps = static_cast<std::uint64_t>(run.integer("sweeps", 100000));
  g.burn_in = static_cast<std::uint64_t>(run.integer("burn_in", 1000));
  g.stride = static_cast<std::uint64_t>(run.integer("stride", 0));
  g.seed = static_cast<std::uint64_t>(run.integer("seed", 1));
  g.width = run.num("width", 0.0);
  g.chains = static_cast<int>(run.integer("chains", 1));
  g.workers = run.info.workers;
  return g;
}

int cmd_graphs(const Command& cmd) {
  auto run = merge(cmd);
  const int n = static_cast<int>(run.integer("n", 4));
  const auto cls = run.str("class", "connected");
  std::vector<cex::LabeledGraph> graphs;
  if (cls == "connected") {
    graphs = cex::enumerate_connected(n);
  } else if (cls == "biconnected") {
    graphs = cex::enumerate_biconnected(n);
  } else if (cls == "trees") {
    graphs = cex::enumerate_trees(n);
  } else {
    cex::fail_input("unknown class '" + cls + "' (connected|biconnected|trees)");
  }
  if (const auto dump = run.cfg.get("dump")) {
    std::ofstream f(*dump, std::ios::binary);
    if (!f) throw cex::Error(cex::ErrorKind::runtime, "cannot write '" + *dump + "'");
    f << cex::dump_graphs(graphs);
  }
  emit(run, std::to_string(graphs.size()) + "\n");
  return kOk;
}

int cmd_free_energy_scan(const Command& cmd) {
  auto run = merge(cmd);
  const auto p = potential_of(run);
  const double rho = run.num("rho", 0.1);
  const double beta = run.num("beta", 1.0);
  const int dim = static_cast<int>(run.integer("dim", 1));
  const int n_max = static_cast<int>(run.integer("n_max", 3));
  const auto ells = run.list("ells", {100, 200, 400, 800});
  const auto bc_choice = run.str("bc", "both");
  std::vector<cex::BoundaryCondition> bcs;
  if (bc_choice == "both") {
    bcs = {cex::BoundaryCondition::periodic, cex::BoundaryCondition::zero};
  } else {
    bcs = {cex::parse_bc(bc_choice)};
  }
  const auto mc = mc_of(run);
  const bool rods = dim == 1 && p.kind() == cex::PotentialKind::hard_core;
  const auto series = cex::free_energy_series(rho, beta, p, n_max, dim, mc);
  const double beta_f_exact = rods ? cex::tonks_beta_f(rho, p.range())
                              : p.kind() == cex::PotentialKind::ideal ? rho * (std::log(rho) - 1)
                                                                      : NAN;
  const double reference = std::isnan(beta_f_exact) ? series.value : beta_f_exact;
  if (!rods && p.kind() != cex::PotentialKind::ideal) run.info.seed = mc.seed;

  std::string out = cex::csv_preamble(run.info);
  out += "bc,ell,N,rho,log_z_density,beta_f_series,beta_f_reference,error,volume_error,surface_error,method\n";
  for (auto bc : bcs) {
    for (double ell : ells) {
      const cex::Box box(ell, dim, bc);
      const int N = static_cast<int>(std::lround(rho * box.volume()));
      const double rho_n = N / box.volume();
      cex::PartitionResult z;
      if (rods) {
        z = cex::z_exact_hard_rods(N, ell, p.range(), bc);
      } else if (p.kind() == cex::PotentialKind::ideal) {
        z = cex::z_bruteforce(N, box, p, beta, cex::Method::exact, 0, 0);
      } else if (N <= 10) {
        z = cex::z_bruteforce(N, box, p, beta, cex::Method::monte_carlo, mc.samples, mc.seed);
      } else {
        out += "# omitted " + std::string(cex::to_string(bc)) + " ell=" + cex::format_double(ell) +
               ": N=" + std::to_string(N) + " beyond the brute-force oracle\n";
        continue;
      }
      if (z.jammed) {
        out += "# omitted " + std::string(cex::to_string(bc)) + " ell=" + cex::format_double(ell) +
               ": jammed\n";
        continue;
      }
      const double density = z.logZ / box.volume();
      // log Z / |Lambda| tends to -beta f.
      const double error = density + reference;
      out += std::string(cex::to_string(bc)) + "," + cex::format_double(ell) + "," +
             std::to_string(N) + "," + cex::format_double(rho_n) + "," + cex::format_double(density) +
             "," + cex::format_double(series.value) + "," + cex::format_double(reference) + "," +
             cex::format_double(error) + "," + cex::format_double(error * box.volume()) + "," +
             cex::format_double(error * box.volume() / box.surface()) + "," +
             std::string(cex::to_string(z.method)) + "\n";
    }
  }
  emit(run, out);
  return kOk;
}

int cmd_kp_report(const Command& cmd) {
  auto run = merge(cmd);
  const auto p = potential_of(run);
  const double rho = run.num("rho", 0.05);
  const double a = run.num("a", 1.0);
  const double beta = run.num("beta", 1.0);
  const int dim = static_cast<int>(run.integer("dim", 1));
  const auto r = cex::kp_check(p, beta, rho, a, run.num("c", 0.0), dim);
  json res{{"a", r.a},
           {"c", r.c},
           {"rho", r.rho},
           {"C_beta", number(r.C)},
           {"delta", number(r.delta)},
           {"delta_prime", number(r.delta_prime)},
           {"series_bound", number(r.series_bound)},
           {"margin", number(r.margin)},
           {"pass", r.pass},
           {"condition_met", r.condition_met}};
  int terms = 0;
  res["C_rho"] = number(cex::c_of_rho(rho, beta, p, a, dim, &terms));
  res["C_rho_terms"] = terms;
  if (run.cfg.has("ell")) {
    const auto box = box_of(run, run.num("ell", 100.0));
    const int N = static_cast<int>(std::lround(rho * box.volume()));
    auto mc = mc_of(run);
    const auto b = cex::boundary_split_bound(N, box, beta, p, a, mc);
    res["boundary_split"] = {{"N", N},
                             {"S0_bound", number(b.S0_bound)},
                             {"S1_star", number(b.S1_star)},
                             {"S1_starstar_bound", number(b.S1_starstar_bound)},
                             {"chain_factor", number(b.chain_factor)},
                             {"converged", b.converged}};
  }
  emit_json(run, res);
  return r.pass ? kOk : kConvergence;
}

int cmd_beta(const Command& cmd) {
  auto run = merge(cmd);
  const auto p = potential_of(run);
  const auto mc = mc_of(run);
  const int n = static_cast<int>(run.integer("n", 2));
  const auto m = cex::beta_n(n, p, run.num("beta", 1.0), static_cast<int>(run.integer("dim", 1)), mc);
  if (m.method == cex::Method::monte_carlo) run.info.seed = mc.seed;
  emit_json(run, {{"op", "beta_n"}, {"n", n}, {"beta_n", measurement(m)}});
  return kOk;
}

int cmd_correlations(const Command& cmd) {
  auto run = merge(cmd);
  const auto route = run.str("route", "gibbs");
  if (route == "psi") {
    cex::PsiRequest req;
    req.N = static_cast<int>(run.integer("N", 2));
    req.box = box_of(run, run.num("ell", 10.0));
    req.potential = potential_of(run);
    req.beta = run.num("beta", 1.0);
    const double eta = run.num("eta", 0.1);
    const int dim = req.box.dim;
    std::vector<double> q1 = run.list("q1", std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    req.sources.push_back({q1, eta});
    const auto seps = run.list("r", {});
    const auto mc = mc_of(run);
    json rows = json::array();
    if (seps.empty()) {
      const auto c = cex::psi_coefficients(req, mc);
      const auto d = cex::one_point_from_psi(req, mc);
      rows.push_back({{"coefficients", json::parse(c.json())},
                      {"rho1_lab", measurement(d.value)},
                      {"finite_difference", number(d.finite_difference)},
                      {"flagged", d.flagged}});
      if (c.method == cex::Method::monte_carlo) run.info.seed = mc.seed;
    }
    for (double r : seps) {
      auto q2 = q1;
      q2[0] += r;
      req.sources.resize(1);
      req.sources.push_back({q2, eta});
      const auto c = cex::psi_coefficients(req, mc);
      const auto t = cex::truncated_two_point(req, mc);
      if (c.method == cex::Method::monte_carlo) run.info.seed = mc.seed;
      rows.push_back({{"r", r},
                      {"coefficients", json::parse(c.json())},
                      {"truncated_labelled", measurement(t.value)},
                      {"finite_difference", number(t.finite_difference)},
                      {"flagged", t.flagged}});
    }
    emit_json(run, {{"route", "psi"}, {"eta", eta}, {"rows", rows}});
    return kOk;
  }
  if (route != "gibbs") cex::fail_input("unknown route '" + route + "' (gibbs|psi)");
  const auto g = gibbs_of(run);
  run.info.seed = g.seed;
  const auto kind = cex::parse_correlation_kind(run.str("kind", "truncated-labelled"));
  const auto table = cex::correlation_estimate(g, kind, static_cast<int>(run.integer("bins", 20)),
                                               run.num("r_max", 0.0),
                                               static_cast<int>(run.integer("blocks", 20)));
  std::string out = cex::csv_preamble(run.info);
  out += "# kind=" + std::string(cex::to_string(kind)) + " snapshots=" + std::to_string(table.snapshots) +
         " acceptance=" + cex::format_double(table.acceptance) + "\n";
  if (kind == cex::CorrelationKind::one_point) {
    out += "# integral=" + cex::format_double(table.integral) +
           " integral_stderr=" + cex::format_double(table.integral_error) + "\n";
  }
  out += table.csv();
  if (const auto dump = run.cfg.get("snapshots")) {
    std::ofstream f(*dump, std::ios::binary);
    if (!f) throw cex::Error(cex::ErrorKind::runtime, "cannot write '" + *dump + "'");
    f << "chain,step";
    for (int i = 1; i <= g.N * g.box.dim; ++i) f << ",q_" << i;
    f << "\n";
    cex::gibbs_sample(g, [&](int c, std::uint64_t step, const std::vector<double>& q) {
      f << c << "," << step;
      for (double x : q) f << "," << cex::format_double(x);
      f << "\n";
    });
  }
  emit(run, out);
  return kOk;
}

int cmd_decay(const Command& cmd) {
  auto run = merge(cmd);
  auto g = gibbs_of(run);
  if (!run.cfg.has("N")) g.N = 20;
  if (!run.cfg.has("ell")) g.box = box_of(run, 200.0);
  run.info.seed = g.seed;
  const double R = g.potential.range();
  std::vector<double> def;
  for (int k = 2; k <= 10; ++k) def.push_back(k * R + 0.25 * R);
  const auto d = cex::decay_profile(g, run.list("separations", def), run.num("bin_width", 0.5 * R),
                                    static_cast<int>(run.integer("blocks", 20)));
  std::string out = cex::csv_preamble(run.info);
  out += "# C=" + cex::format_double(d.C) + " C2=" + cex::format_double(d.C2) + " C3=" +
         cex::format_double(d.C3) + " rate=" + cex::format_double(d.rate) +
         " rate_resolved=" + (d.rate_resolved ? "1" : "0") + " plateau=" +
         cex::format_double(d.plateau) + " snapshots=" + std::to_string(d.snapshots) + "\n";
  out += d.csv();
  emit(run, out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cex: canonical cluster expansion toolkit"};
  app.set_version_flag("--version", cex::version());
  app.require_subcommand(1);

  std::vector<Command> cmds;
  cmds.reserve(6);
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    cmds.push_back({name, app.add_subcommand(name, help), {}, {}});
    auto& c = cmds.back();
    c.app->add_option("--config", c.config_path, "key = value configuration file");
    c.flag("out", "output file (default stdout)");
    c.flag("workers", "worker threads / MC streams (recorded; results depend on it)");
    return c;
  };

  auto& graphs = add("graphs", "count (and optionally dump) labeled graphs");
  graphs.flag("n", "vertex count");
  graphs.flag("class", "connected|biconnected|trees");
  graphs.flag("dump", "write graphs, one per line, to this file");

  auto& scan = add("free-energy-scan", "finite-volume free energy against the series");
  for (const char* k : {"rho", "beta", "dim", "n_max", "ells", "bc", "samples", "seed", "potential"}) {
    scan.flag(k, k);
  }

  auto& kp = add("kp-report", "KP condition and boundary bounds");
  for (const char* k : {"rho", "a", "c", "beta", "dim", "ell", "bc", "samples", "seed", "potential"}) {
    kp.flag(k, k);
  }

  auto& beta = add("beta", "irreducible coefficient beta_n");
  for (const char* k : {"n", "beta", "dim", "samples", "seed", "mc", "potential"}) beta.flag(k, k);

  auto& corr = add("correlations", "correlation functions from Gibbs sampling or Psi");
  for (const char* k : {"route", "kind", "N", "ell", "bc", "dim", "beta", "bins", "r_max", "blocks",
                        "sweeps", "burn_in", "stride", "chains", "width", "seed", "snapshots", "eta",
                        "q1", "r", "samples", "mc", "potential"}) {
    corr.flag(k, k);
  }

  auto& decay = add("decay", "truncated correlation decay table against the envelope");
  for (const char* k : {"N", "ell", "bc", "dim", "beta", "sweeps", "burn_in", "stride", "chains",
                        "width", "seed", "separations", "bin_width", "blocks", "potential"}) {
    decay.flag(k, k);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    for (const auto& c : cmds) {
      if (!c.app->parsed()) continue;
      if (c.name == "graphs") return cmd_graphs(c);
      if (c.name == "free-energy-scan") return cmd_free_energy_scan(c);
      if (c.name == "kp-report") return cmd_kp_report(c);
      if (c.name == "beta") return cmd_beta(c);
      if (c.name == "correlations") return cmd_correlations(c);
      if (c.name == "decay") return cmd_decay(c);
    }
  } catch (const cex::Error& e) {
    std::cerr << "cex: " << e.what() << "\n";
    switch (e.kind()) {
      case cex::ErrorKind::invalid_input:
      case cex::ErrorKind::cap_exceeded: return kInput;
      case cex::ErrorKind::convergence: return kConvergence;
      case cex::ErrorKind::runtime: return kRuntime;
    }
  } catch (const std::exception& e) {
    std::cerr << "cex: " << e.what() << "\n";
    return kRuntime;
  }
  return kRuntime;
}
