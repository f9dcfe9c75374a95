#include <benchmark/benchmark.h>

#include "cex/correlations.hpp"
#include "cex/graph.hpp"
#include "cex/oracle.hpp"
#include "cex/polymer.hpp"
#include "cex/weights.hpp"

namespace {

const cex::PairPotential kRods = cex::PairPotential::hard_core(1.0);

void BM_EnumerateConnected(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cex::enumerate_connected(n));
}
BENCHMARK(BM_EnumerateConnected)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_ClusterCoefficient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cex::MultiIndex I{{{1, 2, 3}, 1}, {{1, 2}, n}};
  for (auto _ : state) benchmark::DoNotOptimize(cex::cluster_coefficient(I));
}
BENCHMARK(BM_ClusterCoefficient)->DenseRange(1, 5);

void BM_OmegaExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cex::WeightRequest req{n, kRods, 1.0, cex::Box(20.0, 1, cex::BoundaryCondition::zero), {}};
  for (auto _ : state) benchmark::DoNotOptimize(cex::omega(req));
}
BENCHMARK(BM_OmegaExact)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_OmegaMonteCarlo(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cex::WeightRequest req{n, kRods, 1.0, cex::Box(20.0, 2, cex::BoundaryCondition::zero), {}};
  cex::McOptions mc;
  mc.samples = 100'000;
  for (auto _ : state) benchmark::DoNotOptimize(cex::omega(req, mc));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mc.samples));
}
BENCHMARK(BM_OmegaMonteCarlo)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_ClusterSums(benchmark::State& state) {
  const auto sys = cex::PolymerSystem::all_subsets(4, {{2, -0.1}, {3, 0.01}, {4, -0.001}});
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sys.cluster_sums(order));
}
BENCHMARK(BM_ClusterSums)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_GibbsSweeps(benchmark::State& state) {
  cex::GibbsConfig cfg;
  cfg.N = static_cast<int>(state.range(0));
  cfg.box = cex::Box(10.0 * cfg.N, 1, cex::BoundaryCondition::periodic);
  cfg.potential = kRods;
  cfg.width = 2.0;
  cex::MetropolisChain chain(cfg, 0);
  for (auto _ : state) chain.sweep();
  state.SetItemsProcessed(state.iterations() * cfg.N);
}
BENCHMARK(BM_GibbsSweeps)->Arg(2)->Arg(20)->Arg(100);

void BM_PsiExact(benchmark::State& state) {
  const cex::PsiRequest req{static_cast<int>(state.range(0)), cex::Box(10.0, 1, cex::BoundaryCondition::periodic),
                            kRods, 1.0, {{{0.0}, 0.1}, {{3.0}, 0.1}}};
  for (auto _ : state) benchmark::DoNotOptimize(cex::psi_coefficients(req));
}
BENCHMARK(BM_PsiExact)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_QuadratureZ(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const cex::Box box(10.0, 1, cex::BoundaryCondition::zero);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cex::z_bruteforce(N, box, kRods, 1.0, cex::Method::quadrature, 20'000'000, 0));
  }
}
BENCHMARK(BM_QuadratureZ)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
