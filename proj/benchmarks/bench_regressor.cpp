#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "panda/regressor.hpp"

namespace {

struct Problem {
  panda::FeatureTable table;
  std::vector<double> labels;
};

Problem make_problem(std::size_t rows, std::size_t cols) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) names.push_back("f" + std::to_string(c));
  Problem p{panda::FeatureTable(names), {}};
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> row(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto& v : row) v = u(rng);
    p.table.add_row(row);
    p.labels.push_back(row[0] * 2 + (row[1] > 0.5 ? 1.0 : 0.0) + 0.1 * u(rng));
  }
  return p;
}

void BM_Fit(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)), 12);
  panda::TrainOptions opts;
  opts.n_trees = 50;
  for (auto _ : state) benchmark::DoNotOptimize(panda::fit(p.table, p.labels, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fit)->Arg(120)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const Problem p = make_problem(1000, 12);
  const panda::BoostedEnsemble m = panda::fit(p.table, p.labels, panda::TrainOptions{});
  std::size_t r = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.predict(p.table.row(r)));
    r = (r + 1) % p.table.num_rows();
  }
}
BENCHMARK(BM_Predict);

}  // namespace
