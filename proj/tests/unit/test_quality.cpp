#include <gtest/gtest.h>

#include <cmath>

#include "panda/baselines.hpp"
#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/log.hpp"
#include "panda/quality.hpp"
#include "support.hpp"

namespace panda {
namespace {

TEST(Area, TrainsOneRowPerConfig) {
  const Dataset ds = test::small_synth(4, 3);
  const AreaModel m = train_area(ds, test::fast_options());
  EXPECT_TRUE(m.trained);
  EXPECT_FALSE(m.use_resource_factor);
  for (ComponentId c : kAllComponents) {
    // Features are the component's configuration parameters only.
    EXPECT_EQ(m.per_component[c].feature_names().size(), component_params(c).size());
  }
  double err = 0.0;
  for (const auto& s : ds.samples()) {
    double label = 0.0;
    for (double a : *s.component_area) label += a;
    const AreaPrediction p = predict_area(m, s.config);
    double sum = 0.0;
    for (double v : p.breakdown) sum += v;
    EXPECT_DOUBLE_EQ(sum, p.total);
    err += std::abs(p.total - label) / label;
  }
  EXPECT_LT(err / static_cast<double>(ds.size()), 0.05);
}

TEST(Area, WorkloadIndependent) {
  const Dataset ds = test::small_synth(4, 2);
  // Same input rows regardless of how many workloads each config has.
  const AreaModel a = train_area(ds, test::fast_options());
  const AreaModel b = train_area(test::small_synth(4, 1), test::fast_options());
  EXPECT_EQ(a, b);
}

TEST(Area, RejectsInconsistentLabels) {
  std::vector<Sample> samples = test::small_synth(4, 2).samples();
  samples[1].component_area->values[0] *= 1.5;
  EXPECT_THROW(train_area(Dataset(samples), test::fast_options()), InvariantError);
  samples = test::small_synth(4, 1).samples();
  samples[0].component_area.reset();
  EXPECT_THROW(train_area(Dataset(samples), test::fast_options()), InvariantError);
}

TEST(Area, ResourceFactorMode) {
  const Dataset ds = test::small_synth(4, 1);
  AreaSettings settings;
  settings.use_resource_factor = true;
  ScopedWarningCapture quiet;
  const AreaModel m = train_area(ds, test::fast_options(), ResourceParams{}, settings);
  EXPECT_TRUE(m.use_resource_factor);
  EXPECT_TRUE(m.resource_params.fitted);
  const AreaModel back = deserialize_area(serialize(m));
  EXPECT_EQ(back, m);
  for (const auto& c : ds.configurations()) {
    EXPECT_EQ(predict_area(back, c).total, predict_area(m, c).total);
  }
}

TEST(Area, UntrainedThrows) {
  EXPECT_THROW(predict_area(AreaModel{}, builtin_configuration("C1")), ModelError);
}

TEST(Perf, CalibratesCycles) {
  const Dataset ds = test::small_synth(5, 3);
  const PerfCalibrator m = train_perf(ds, test::fast_options());
  double err = 0.0;
  for (const auto& s : ds.samples()) {
    const double p = predict_cycles(m, s.config, s.events);
    EXPECT_GE(p, 1.0);
    err += std::abs(p - *s.true_cycles) / *s.true_cycles;
  }
  EXPECT_LT(err / static_cast<double>(ds.size()), 0.05);
  const auto back = deserialize_perf(serialize(m));
  EXPECT_EQ(back, m);
}

TEST(Perf, Features) {
  const Sample s = test::small_synth(5, 1).samples()[0];
  const FeatureRow row = build_perf_features(s.config, s.events);
  EXPECT_EQ(row.names.size(), kNumParams + perf_events().size());
  EXPECT_EQ(row.at("numCycles_rate"), 1.0);
}

TEST(Perf, Errors) {
  std::vector<Sample> samples = test::small_synth(5, 1).samples();
  samples[2].true_cycles.reset();
  EXPECT_THROW(train_perf(Dataset(samples), test::fast_options()), InvariantError);
  EventVector ev;
  EXPECT_THROW(predict_cycles(PerfCalibrator{}, builtin_configuration("C1"), ev), ModelError);
}

TEST(Energy, Formula) {
  EXPECT_DOUBLE_EQ(energy_joules(0.5, 2e9, 1e9), 1.0);
  EXPECT_EQ(energy_joules(0.0, 1e6, 1e9), 0.0);
  EXPECT_THROW(energy_joules(1.0, 1.0, 0.0), InvalidArgument);
}

TEST(Energy, CombinesPowerAndCycles) {
  const Dataset ds = test::small_synth(6, 2);
  ScopedWarningCapture quiet;
  const AnyPowerModel power = train_power_model(ModelKind::kPanda, ds, test::fast_options(), {});
  const PerfCalibrator perf = train_perf(ds, test::fast_options());
  for (const auto& s : ds.samples()) {
    const double want = energy_joules(predict_any(power, s.config, s.events).total,
                                      predict_cycles(perf, s.config, s.events),
                                      s.events.frequency_hz);
    EXPECT_EQ(predict_energy(power, perf, s.config, s.events), want);
  }
}

}  // namespace
}  // namespace panda
