#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/log.hpp"
#include "panda/power_model.hpp"
#include "support.hpp"

namespace panda {
namespace {

TEST(FeatureSpec, ComponentParams) {
  EXPECT_EQ(component_params(ComponentId::kBP),
            (std::vector<Param>{Param::kFetchWidth, Param::kBranchCount}));
  EXPECT_EQ(component_params(ComponentId::kRNU), (std::vector<Param>{Param::kDecodeWidth}));
  EXPECT_EQ(component_params(ComponentId::kDCache),
            (std::vector<Param>{Param::kDCacheWay, Param::kDTLBEntry, Param::kDCacheMSHR,
                                Param::kMemIssueWidth}));
  EXPECT_EQ(component_params(ComponentId::kOtherLogic).size(), kNumParams);
  // Every resource-function input is visible to its component's regressor.
  EXPECT_EQ(component_params(ComponentId::kLSU),
            (std::vector<Param>{Param::kLDQEntry, Param::kSTQEntry, Param::kMemIssueWidth}));
}

TEST(FeatureSpec, Names) {
  const auto spec = default_feature_spec(ComponentId::kICache);
  const auto names = spec.feature_names();
  ASSERT_EQ(names.size(), spec.config_features.size() + spec.event_features.size());
  EXPECT_EQ(names[0], "ICacheWay");
  EXPECT_EQ(names[2], event_feature_name(spec.event_features[0], true));
  EXPECT_EQ(event_feature_name("fetch_insts", true), "fetch_insts_rate");
  EXPECT_EQ(event_feature_name("fetch_insts", false), "fetch_insts");
  const auto raw = default_feature_spec(ComponentId::kICache, false).feature_names();
  EXPECT_EQ(raw[2], spec.event_features[0]);
}

TEST(FeatureRow, NormalizesAndImputes) {
  EventVector ev;
  ev.baseline_cycles = 200;
  ev.counts["numCycles"] = 200;
  ev.counts["fetch_insts"] = 50;
  const std::vector<Param> params = {Param::kRobEntry};
  const std::vector<std::string> events = {"fetch_insts", "icache_overallAccesses"};
  const auto& c = builtin_configuration("C2");
  const FeatureRow row = build_feature_row(params, events, true, c, ev);
  EXPECT_EQ(row.names, (std::vector<std::string>{"RobEntry", "fetch_insts_rate",
                                                 "icache_overallAccesses_rate"}));
  EXPECT_EQ(row.values, (std::vector<double>{32, 0.25, 0.0}));
  EXPECT_EQ(row.imputed, (std::vector<std::string>{"icache_overallAccesses"}));

  const FeatureRow raw = build_feature_row(params, events, false, c, ev);
  EXPECT_EQ(raw.values[1], 50);

  EventVector zero = ev;
  zero.counts["numCycles"] = 0;
  EXPECT_THROW(build_feature_row(params, events, true, c, zero), InvalidArgument);
  EXPECT_NO_THROW(build_feature_row(params, events, false, c, zero));
}

class PandaTrained : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    data_ = new Dataset(test::small_synth(3, 3));
    ScopedWarningCapture quiet;
    model_ = new PandaPowerModel(train_panda(*data_, test::fast_options(), ResourceParams{}));
  }
  static void TearDownTestSuite() {
    delete data_;
    delete model_;
  }
  static Dataset* data_;
  static PandaPowerModel* model_;
};
Dataset* PandaTrained::data_ = nullptr;
PandaPowerModel* PandaTrained::model_ = nullptr;

TEST_F(PandaTrained, BreakdownSumsToTotal) {
  for (const auto& s : data_->samples()) {
    const PowerPrediction p = predict_total_power(*model_, s.config, s.events);
    double sum = 0.0;
    for (ComponentId c : kAllComponents) {
      EXPECT_GE(p.breakdown[c], 0.0);
      EXPECT_EQ(p.breakdown[c], predict_component_power(*model_, c, s.config, s.events));
      sum += p.breakdown[c];
    }
    EXPECT_DOUBLE_EQ(sum, p.total);
  }
}

TEST_F(PandaTrained, FitsTrainingData) {
  double err = 0.0;
  for (const auto& s : data_->samples()) {
    err += std::abs(predict_total_power(*model_, s.config, s.events).total - s.total_power) /
           s.total_power;
  }
  EXPECT_LT(err / static_cast<double>(data_->size()), 0.03);
}

TEST_F(PandaTrained, ModelShape) {
  EXPECT_TRUE(model_->trained);
  EXPECT_TRUE(model_->resource_params.fitted);
  EXPECT_EQ(model_->train_options, test::fast_options());
  for (ComponentId c : kAllComponents) {
    EXPECT_EQ(model_->per_component[c].feature_names(), model_->feature_specs[c].feature_names());
  }
}

TEST_F(PandaTrained, RoundTrip) {
  const std::string bytes = serialize(*model_);
  const PandaPowerModel back = deserialize_panda_model(bytes);
  EXPECT_EQ(back, *model_);
  EXPECT_EQ(serialize(back), bytes);
  for (const auto& s : data_->samples()) {
    EXPECT_EQ(predict_total_power(back, s.config, s.events).total,
              predict_total_power(*model_, s.config, s.events).total);
  }
  std::string wrong = bytes;
  wrong.replace(wrong.find("panda-model-1"), 13, "panda-model-2");
  EXPECT_THROW(deserialize_panda_model(wrong), VersionMismatchError);
  EXPECT_THROW(deserialize_panda_model(bytes.substr(0, 100)), CorruptPayloadError);
}

TEST_F(PandaTrained, Deterministic) {
  ScopedWarningCapture quiet;
  PowerTrainSettings parallel;
  parallel.jobs = 4;
  EXPECT_EQ(train_panda(*data_, test::fast_options(), ResourceParams{}, parallel), *model_);
}

TEST(PandaModel, PredictionScalesWithResourceFunction) {
  // A constant per-unit regressor makes the output exactly c * F_res.
  PandaPowerModel m;
  m.resource_params.fitted = true;
  m.resource_params.itlb_bias = 2;
  m.resource_params.dtlb_bias = 3;
  m.resource_params.otherlogic_bias = 1;
  for (ComponentId c : kAllComponents) {
    m.feature_specs[c] = default_feature_spec(c);
    m.per_component[c] = BoostedEnsemble::constant(m.feature_specs[c].feature_names(), 0.25);
  }
  m.trained = true;
  EventVector ev;
  ev.baseline_cycles = 10;
  ev.counts["numCycles"] = 10;
  for (const auto& id : {"C1", "C8", "C15", "SP1"}) {
    const auto& cfg = builtin_configuration(id);
    for (ComponentId c : kAllComponents) {
      EXPECT_EQ(predict_component_power(m, c, cfg, ev), 0.25 * eval_resource(c, cfg, m.resource_params));
    }
  }
}

TEST(PandaModel, NegativeOutputsAreFloored) {
  PandaPowerModel m;
  m.resource_params.fitted = true;
  for (ComponentId c : kAllComponents) {
    m.feature_specs[c] = default_feature_spec(c);
    m.per_component[c] = BoostedEnsemble::constant(m.feature_specs[c].feature_names(), -1.0);
  }
  m.trained = true;
  EventVector ev;
  ev.counts["numCycles"] = 10;
  EXPECT_EQ(predict_total_power(m, builtin_configuration("C3"), ev).total, 0.0);
}

TEST(PandaModel, Errors) {
  PandaPowerModel untrained;
  EventVector ev;
  ev.counts["numCycles"] = 1;
  EXPECT_THROW(predict_total_power(untrained, builtin_configuration("C1"), ev), ModelError);
  EXPECT_THROW(train_panda(Dataset{}, TrainOptions{}, ResourceParams{}), InvalidArgument);
  std::vector<Sample> samples = test::small_synth(4, 1).samples();
  samples[3].component_power.reset();
  EXPECT_THROW(train_panda(Dataset(samples), TrainOptions{}, ResourceParams{}), InvariantError);
}

TEST(PandaModel, RawEventsSetting) {
  ScopedWarningCapture quiet;
  const Dataset ds = test::small_synth(8, 2);
  PowerTrainSettings raw;
  raw.normalize_events = false;
  const auto m = train_panda(ds, test::fast_options(), ResourceParams{}, raw);
  EXPECT_FALSE(m.feature_specs[ComponentId::kROB].normalize_events);
  const auto back = deserialize_panda_model(serialize(m));
  EXPECT_EQ(back, m);
}

}  // namespace
}  // namespace panda
