// Serial vs OpenMP fan-out over the two workloads the runner parallelizes:
// analytic sweep points and independent simulation seeds.
#include <benchmark/benchmark.h>

#include "aoi2d/calculus.hpp"
#include "aoi2d/kernel.hpp"
#include "aoi2d/parallel.hpp"
#include "aoi2d/rng.hpp"
#include "aoi2d/sim.hpp"
#include "aoi2d/topology.hpp"

namespace {

using namespace aoi2d;

// Mean minimal 2D-AoI of a 16-sensor ALOHA grid at spacing 1 + i.
double sweep_point(std::size_t i) {
  GridSpec g;
  g.d = 1.0 + static_cast<double>(i);
  g.s_select = 16;
  g.count = SensorCount::LatticePoints;
  const Kernel k = Kernel::exponential(128, 128);
  return mean_from_ccdf(ccdf_2d_min(grid_links(g, ChannelKind::SlottedAloha), k, g.point_of_interest()));
}

// Deliveries of sensor 0 in one simulated independent-ALOHA batch.
double seed_batch(std::size_t i) {
  const DeliveryLog log = simulate_independent_aloha(16, 0.02, 200'000, derive_seed(99, i));
  return static_cast<double>(log.delivered_count(0));
}

constexpr std::size_t kPoints = 100;
constexpr std::size_t kSeeds = 16;

void BM_sweep_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial_map(kPoints, sweep_point));
}

void BM_sweep_parallel(benchmark::State& st) {
  const int w = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(parallel_map(kPoints, sweep_point, w));
}

void BM_seeds_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial_map(kSeeds, seed_batch));
}

void BM_seeds_parallel(benchmark::State& st) {
  const int w = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(parallel_map(kSeeds, seed_batch, w));
}

}  // namespace

BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sweep_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_seeds_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_seeds_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
