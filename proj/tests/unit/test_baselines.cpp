#include <gtest/gtest.h>

#include "panda/baselines.hpp"
#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/log.hpp"
#include "support.hpp"

namespace panda {
namespace {

// Every component's power is slope * F_res + intercept, identical across
// workloads.
Dataset linear_power_dataset(const std::vector<std::string>& ids, const std::vector<std::string>& workloads) {
  ResourceParams truth;
  truth.fitted = true;
  truth.itlb_bias = 2;
  truth.dtlb_bias = 4;
  truth.otherlogic_bias = 1;
  std::vector<Sample> samples;
  for (const auto& id : ids) {
    for (const auto& w : workloads) {
      Sample s;
      s.config = builtin_configuration(id);
      s.tech = {"t", 40, 1.1};
      s.events.workload = w;
      s.events.baseline_cycles = 100;
      s.events.counts["numCycles"] = 100;
      s.events.counts["fetch_insts"] = w == "a" ? 30 : 70;
      PerComponent<double> p;
      double total = 0.0;
      for (ComponentId c : kAllComponents) {
        const double k = 1 + static_cast<double>(index_of(c));
        // No intercept on the biased components so the fitted biases match.
        const double intercept = requires_bias(c) ? 0.0 : 0.001 * k;
        p[c] = 0.0005 * k * eval_resource(c, s.config, truth) + intercept;
        total += p[c];
      }
      s.component_power = p;
      s.total_power = total;
      samples.push_back(s);
    }
  }
  return Dataset(std::move(samples));
}

TEST(Analytical, ExactOnLinearData) {
  const Dataset ds = linear_power_dataset(normal_configuration_ids(), {"a", "b"});
  const Dataset train = ds.subset({"C1", "C3", "C6", "C9", "C12", "C15"});
  const auto m = train_analytical(train, ResourceParams{});
  EXPECT_TRUE(m.trained);
  for (const auto& s : ds.samples()) {
    EXPECT_NEAR(predict_power(m, s.config, s.events).total, s.total_power, 1e-9 * s.total_power);
  }
}

TEST(Analytical, TwoPointFit) {
  // F_res 4 and 8 at 8 mW and 16 mW: slope 2 mW per unit, intercept 0.
  const Dataset ds = linear_power_dataset({"C1", "C6"}, {"a"});
  std::vector<Sample> samples = ds.samples();
  samples[0].component_power->values[index_of(ComponentId::kBP)] = 0.008;
  samples[1].component_power->values[index_of(ComponentId::kBP)] = 0.016;
  for (auto& s : samples) {
    s.total_power = 0;
    for (double v : *s.component_power) s.total_power += v;
  }
  ScopedWarningCapture quiet;
  const auto m = train_analytical(Dataset(samples), ResourceParams{});
  EXPECT_NEAR(m.per_component[ComponentId::kBP].slope, 0.002, 1e-15);
  EXPECT_NEAR(m.per_component[ComponentId::kBP].intercept, 0.0, 1e-15);
}

TEST(Analytical, SingleResourceValueWarnsAndFitsThroughOrigin) {
  const Dataset ds = linear_power_dataset({"C1", "C2"}, {"a"});
  ScopedWarningCapture cap;
  const auto m = train_analytical(ds, ResourceParams{});
  EXPECT_TRUE(cap.contains("BP has a single resource value"));
  const auto& bp = m.per_component[ComponentId::kBP];
  EXPECT_EQ(bp.intercept, 0.0);
  // Both configs have FetchWidth 4, so the training configs get their mean.
  const double mean = 0.5 * ((*ds.samples()[0].component_power)[ComponentId::kBP] +
                             (*ds.samples()[1].component_power)[ComponentId::kBP]);
  EXPECT_DOUBLE_EQ(predict_power(m, builtin_configuration("C1")).breakdown[ComponentId::kBP], mean);
}

TEST(Analytical, WorkloadInvariant) {
  const Dataset ds = test::small_synth(2, 3);
  ScopedWarningCapture quiet;
  const auto m = train_analytical(ds, ResourceParams{});
  for (const auto& s : ds.samples()) {
    EXPECT_EQ(predict_power(m, s.config, s.events).total, predict_power(m, s.config).total);
  }
}

TEST(Analytical, FloorAtZero) {
  AnalyticalLinearModel m;
  m.resource_params.fitted = true;
  m.trained = true;
  for (auto& lf : m.per_component) lf = {-1.0, 0.0};
  EXPECT_EQ(predict_power(m, builtin_configuration("C4")).total, 0.0);
}

TEST(GlobalMl, ConstantLabels) {
  std::vector<Sample> samples = test::small_synth(6, 2).samples();
  for (auto& s : samples) {
    for (auto& v : *s.component_power) v = 0.01;
    s.total_power = 0.13;
  }
  const Dataset ds(samples);
  const auto m = train_global_ml(ds, test::fast_options());
  for (const auto& s : ds.samples()) EXPECT_DOUBLE_EQ(predict_power(m, s.config, s.events), 0.13);
}

TEST(GlobalMl, UsesEveryParameterAndEvent) {
  const auto m = train_global_ml(test::small_synth(6, 1), test::fast_options());
  EXPECT_EQ(m.ensemble.feature_names().size(), kNumParams + event_registry().size());
  EXPECT_TRUE(m.normalize_events);
}

TEST(ComponentMl, ConstantComponentLabels) {
  std::vector<Sample> samples = test::small_synth(6, 2).samples();
  for (auto& s : samples) {
    for (auto& v : *s.component_power) v = 0.01;
    s.total_power = 0.13;
  }
  const auto m = train_component_ml(Dataset(samples), test::fast_options());
  const auto p = predict_power(m, samples[0].config, samples[0].events);
  for (double v : p.breakdown) EXPECT_DOUBLE_EQ(v, 0.01);
  EXPECT_DOUBLE_EQ(p.total, 0.13);
}

TEST(Baselines, UntrainedModelsThrow) {
  const auto& c = builtin_configuration("C1");
  EventVector ev;
  ev.counts["numCycles"] = 1;
  EXPECT_THROW(predict_power(GlobalMlModel{}, c, ev), ModelError);
  EXPECT_THROW(predict_power(ComponentMlModel{}, c, ev), ModelError);
  EXPECT_THROW(predict_power(AnalyticalLinearModel{}, c, ev), ModelError);
  EXPECT_THROW(train_global_ml(Dataset{}, TrainOptions{}), InvalidArgument);
  EXPECT_THROW(train_analytical(Dataset{}, ResourceParams{}), InvalidArgument);
}

TEST(ModelKind, Names) {
  for (ModelKind k : {ModelKind::kPanda, ModelKind::kGlobalMl, ModelKind::kComponentMl,
                      ModelKind::kAnalytical}) {
    EXPECT_EQ(parse_model_kind(model_kind_name(k)), k);
  }
  EXPECT_EQ(model_kind_name(ModelKind::kGlobalMl), "global-ml");
  EXPECT_FALSE(parse_model_kind("mcpat").has_value());
}

TEST(AnyModel, RoundTripEveryKind) {
  const Dataset ds = test::small_synth(12, 2);
  ScopedWarningCapture quiet;
  for (ModelKind k : {ModelKind::kPanda, ModelKind::kGlobalMl, ModelKind::kComponentMl,
                      ModelKind::kAnalytical}) {
    const AnyPowerModel m = train_power_model(k, ds, test::fast_options(), ResourceParams{});
    EXPECT_EQ(kind_of(m), k);
    const std::string bytes = serialize(m);
    const AnyPowerModel back = deserialize_power_model(bytes);
    EXPECT_EQ(kind_of(back), k);
    EXPECT_EQ(serialize(back), bytes);
    for (const auto& s : ds.samples()) {
      const TotalPower a = predict_any(m, s.config, s.events);
      const TotalPower b = predict_any(back, s.config, s.events);
      EXPECT_EQ(a.total, b.total);
      EXPECT_EQ(a.breakdown.has_value(), k != ModelKind::kGlobalMl);
    }
  }
}

TEST(AnyModel, UnknownFormat) {
  EXPECT_THROW(deserialize_power_model(R"({"format":"panda-area-1"})"), VersionMismatchError);
  EXPECT_THROW(deserialize_power_model("garbage"), CorruptPayloadError);
  const std::string global = serialize(train_global_ml(test::small_synth(1, 1), test::fast_options()));
  EXPECT_THROW(deserialize_component_ml(global), VersionMismatchError);
}

}  // namespace
}  // namespace panda
