#include <benchmark/benchmark.h>

#include "furry/decoupling.hpp"
#include "furry/dirac.hpp"
#include "furry/furry.hpp"
#include "furry/grid.hpp"

using namespace furry;

namespace {

void BM_AssembleSystem(benchmark::State& state) {
  const ChannelGrid grid = build_channel_grid(-1, static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(grid, 0.3));
}
BENCHMARK(BM_AssembleSystem)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ProjectionSeries(benchmark::State& state) {
  const ChannelGrid grid = build_channel_grid(-1, static_cast<int>(state.range(0)), 1.0);
  const OneParticleSystem sys = assemble_system(grid, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(projection_series(sys, 12));
}
BENCHMARK(BM_ProjectionSeries)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_DecouplingBundle(benchmark::State& state) {
  const ChannelGrid grid = build_channel_grid(-1, static_cast<int>(state.range(0)), 1.0);
  const OneParticleSystem sys = assemble_system(grid, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(build_decoupling_bundle(sys, 12));
}
BENCHMARK(BM_DecouplingBundle)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PairInteraction(benchmark::State& state) {
  const ChannelGrid grid = build_channel_grid(-1, static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_pair_interaction(grid));
}
BENCHMARK(BM_PairInteraction)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_FurrySystemTwoParticles(benchmark::State& state) {
  const ChannelGrid grid = build_channel_grid(-1, 64, 1.0);
  const OneParticleSystem sys = assemble_system(grid, 0.2);
  const DecouplingBundle bundle = build_decoupling_bundle(sys, 12);
  const auto pair = build_pair_interaction(grid);
  FurryConfig fc;
  fc.n_plus = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_furry_system(sys, bundle, fc, pair));
}
BENCHMARK(BM_FurrySystemTwoParticles)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
