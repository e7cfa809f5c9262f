#include <benchmark/benchmark.h>

#include "panda/dse.hpp"
#include "panda/log.hpp"
#include "panda/power_model.hpp"
#include "panda/synth.hpp"

namespace {

const panda::Dataset& dataset() {
  static const panda::Dataset ds = panda::generate(panda::default_synth_spec(7));
  return ds;
}

void BM_TrainPanda(benchmark::State& state) {
  panda::ScopedWarningCapture quiet;
  for (auto _ : state) {
    benchmark::DoNotOptimize(panda::train_panda(dataset(), panda::TrainOptions{}, {}));
  }
}
BENCHMARK(BM_TrainPanda)->Unit(benchmark::kMillisecond);

void BM_PredictPanda(benchmark::State& state) {
  panda::ScopedWarningCapture quiet;
  const panda::PandaPowerModel m = panda::train_panda(dataset(), panda::TrainOptions{}, {});
  const auto& samples = dataset().samples();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& s = samples[i];
    benchmark::DoNotOptimize(panda::predict_total_power(m, s.config, s.events));
    i = (i + 1) % samples.size();
  }
}
BENCHMARK(BM_PredictPanda);

void BM_EnumerateDefaultSpace(benchmark::State& state) {
  const panda::DesignSpace space = panda::default_design_space();
  for (auto _ : state) benchmark::DoNotOptimize(panda::enumerate(space));
}
BENCHMARK(BM_EnumerateDefaultSpace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
