#include <benchmark/benchmark.h>

#include <string>

#include "pdmp/engine.hpp"
#include "pdmp/generator.hpp"
#include "pdmp/harness.hpp"
#include "pdmp/models.hpp"
#include "pdmp/tilting.hpp"

using namespace pdmp;

namespace {

const char* const kModels[] = {"ctmc3", "cramer-lundberg", "boundary-reset", "aimd", "ctmc3-clock"};

void BM_Simulate(benchmark::State& state) {
  const ModelBundle b = make_bundle(kModels[state.range(0)], {});
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_skeleton(b.model, b.x0, 5.0, VariateStream(1, i++)));
  state.SetLabel(kModels[state.range(0)]);
}
BENCHMARK(BM_Simulate)->DenseRange(0, 4);

void BM_ExpMartingale(benchmark::State& state) {
  const ModelBundle b = make_bundle(kModels[state.range(0)], {});
  const ExpMartingale m(b.model, b.h());
  const Skeleton sk = simulate_skeleton(b.model, b.x0, 5.0, VariateStream(2, 0));
  for (auto _ : state) benchmark::DoNotOptimize(m(sk, 5.0));
  state.SetLabel(kModels[state.range(0)]);
}
BENCHMARK(BM_ExpMartingale)->DenseRange(0, 4);

void BM_DynkinProcess(benchmark::State& state) {
  const ModelBundle b = make_bundle(kModels[state.range(0)], {});
  const DynkinProcess u(b.model, b.h());
  const Skeleton sk = simulate_skeleton(b.model, b.x0, 5.0, VariateStream(3, 0));
  for (auto _ : state) benchmark::DoNotOptimize(u(sk, 5.0));
  state.SetLabel(kModels[state.range(0)]);
}
BENCHMARK(BM_DynkinProcess)->DenseRange(0, 4);

void BM_TiltedSimulation(benchmark::State& state) {
  const ModelBundle b = make_bundle(kModels[state.range(0)], {});
  const PdmpModel t = tilt_model(b.model, b.h());
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_skeleton(t, b.x0, 5.0, VariateStream(4, i++)));
  state.SetLabel(kModels[state.range(0)]);
}
BENCHMARK(BM_TiltedSimulation)->DenseRange(0, 4);

void BM_MartingaleCheck(benchmark::State& state) {
  const ModelBundle b = make_bundle("cramer-lundberg", {});
  for (auto _ : state)
    benchmark::DoNotOptimize(experiment_martingale_check(b, "exp", {1.0, static_cast<std::size_t>(state.range(0)), 1, 1}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MartingaleCheck)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
