#include <benchmark/benchmark.h>

#include <vector>

#include "urnet/likelihood.hpp"
#include "urnet/simulator.hpp"
#include "urnet/spectral.hpp"
#include "urnet/weight_index.hpp"

namespace {

using namespace urnet;

InteractionSpec row1() {
  return make_spec({1.0, 1.0}, Matrix{{0.10, 0.10}, {0.10, 0.40}}, Matrix{{0.50, 0.50}, {0.50, 0.50}});
}

void BM_SimulatorStep(benchmark::State& state) {
  Simulator sim(row1(), 1);
  std::vector<DrawEvent> ev;
  for (int i = 0; i < state.range(0); ++i) sim.step(ev);
  for (auto _ : state) {
    sim.step(ev);
    benchmark::DoNotOptimize(ev.data());
  }
}
BENCHMARK(BM_SimulatorStep)->Arg(1'000)->Arg(100'000);

void BM_SimulateRun(benchmark::State& state) {
  const auto spec = row1();
  for (auto _ : state) benchmark::DoNotOptimize(run(spec, static_cast<std::uint64_t>(state.range(0)), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateRun)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_WeightIndexAddFind(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  WeightIndex idx(std::vector<double>(n, 1.0));
  Rng rng(3);
  for (auto _ : state) {
    idx.add(rng.below(n), 0.5);
    benchmark::DoNotOptimize(idx.find(rng.uniform() * idx.total()));
  }
}
BENCHMARK(BM_WeightIndexAddFind)->Arg(1 << 10)->Arg(1 << 20);

void BM_LikelihoodEvaluator(benchmark::State& state) {
  const auto log = run(row1(), static_cast<std::uint64_t>(state.range(0)), 11);
  const LikelihoodEvaluator eval(view(log));
  const auto spec = row1();
  for (auto _ : state) benchmark::DoNotOptimize(eval(spec));
  state.counters["terms"] = static_cast<double>(eval.n_terms());
}
BENCHMARK(BM_LikelihoodEvaluator)->Arg(10'000)->Arg(100'000);

void BM_LikelihoodReplay(benchmark::State& state) {
  const auto log = run(row1(), static_cast<std::uint64_t>(state.range(0)), 11);
  const auto spec = row1();
  for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(view(log), spec));
}
BENCHMARK(BM_LikelihoodReplay)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_LeadingEigen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix g(n, n);
  Rng rng(5);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t h = 0; h < n; ++h) g(j, h) = 0.9 * rng.uniform() / static_cast<double>(n);
  for (auto _ : state) benchmark::DoNotOptimize(leading_eigen(g));
}
BENCHMARK(BM_LeadingEigen)->Arg(2)->Arg(16);

}  // namespace
