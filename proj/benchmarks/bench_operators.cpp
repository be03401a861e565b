#include <benchmark/benchmark.h>

#include <cmath>

#include "uukin/boundary_layer.hpp"
#include "uukin/collision.hpp"
#include "uukin/kernel.hpp"
#include "uukin/lattice.hpp"

using namespace uukin;

namespace {

DistributionIso test_data(std::size_t n) {
  const GridPtr g = RadialGrid::geometric(n, 1e-4, 1e2);
  return initial_bose(0.5, ThetaProfile::from_string("exp_poly", 1.0), g);
}

double profile(double xi) { return std::pow(1.0 + xi * xi, -1.2); }

}  // namespace

static void BM_CollisionIso(benchmark::State& state) {
  const DistributionIso f = test_data(static_cast<std::size_t>(state.range(0)));
  CollisionConfig cfg;
  cfg.interpolation = state.range(1) ? Interpolation::Entropic : Interpolation::Linear;
  for (auto _ : state) benchmark::DoNotOptimize(collision_rhs_iso(f, cfg));
}
BENCHMARK(BM_CollisionIso)->ArgsProduct({{64, 128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_CollisionPointwise(benchmark::State& state) {
  const DistributionIso f = test_data(static_cast<std::size_t>(state.range(0)));
  CollisionConfig cfg;
  cfg.symmetrize = false;
  for (auto _ : state) benchmark::DoNotOptimize(collision_rhs_iso(f, cfg));
}
BENCHMARK(BM_CollisionPointwise)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const DistributionIso f = test_data(256);
  for (auto _ : state) benchmark::DoNotOptimize(collision_mc(f, 1.0, static_cast<std::uint64_t>(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_LatticeCoupledRhs(benchmark::State& state) {
  const Lattice3 lat(static_cast<int>(state.range(0)), 0.25);
  const DistributionLattice f = lattice_random_initial(lat, 1.0, 0.5, 0.5, 1);
  const PairCorrelation phi(lat);
  for (auto _ : state) benchmark::DoNotOptimize(rhs_coupled(f, phi, 0.25, 1.0));
}
BENCHMARK(BM_LatticeCoupledRhs)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_LatticeMarkovRhs(benchmark::State& state) {
  const Lattice3 lat(static_cast<int>(state.range(0)), 0.25);
  const DistributionLattice f = lattice_random_initial(lat, 1.0, 0.5, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rhs_markov(f, 1.0));
}
BENCHMARK(BM_LatticeMarkovRhs)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_KernelIntegral(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(broadened_kernel_integral(1.0, 0.1));
}
BENCHMARK(BM_KernelIntegral)->Unit(benchmark::kMicrosecond);

static void BM_HierarchyRhs(benchmark::State& state) {
  const SelfSimilarProfile prof = analytic_profile(profile, 1e-3, 1e2);
  AsymptoticOptions ao;
  ao.n = static_cast<std::size_t>(state.range(0));
  const HierarchyState s = asymptotic_data(prof, -1.0, 1.069, ao);
  for (auto _ : state) benchmark::DoNotOptimize(bl_rhs_truncated(s));
}
BENCHMARK(BM_HierarchyRhs)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
