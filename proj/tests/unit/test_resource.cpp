#include <gtest/gtest.h>

#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/log.hpp"
#include "panda/resource.hpp"
#include "support.hpp"

namespace panda {
namespace {

// One sample per config; ITLB/DTLB/OtherLogic power follows
// slope * (driver + bias) exactly, every other component gets 1 mW.
Dataset linear_dataset(const std::vector<std::string>& ids, double itlb_bias, double dtlb_bias,
                       double other_bias, double slope = 0.002) {
  std::vector<Sample> samples;
  for (const auto& id : ids) {
    Sample s;
    s.config = builtin_configuration(id);
    s.tech = {"t", 40, 1.1};
    s.events.workload = "w";
    s.events.baseline_cycles = 10;
    s.events.counts["numCycles"] = 10;
    PerComponent<double> p;
    for (ComponentId c : kAllComponents) p[c] = 0.001;
    p[ComponentId::kITLB] = slope * (s.config.dtlb_entry + itlb_bias);
    p[ComponentId::kDTLB] = 2 * slope * (s.config.dtlb_entry + dtlb_bias);
    p[ComponentId::kOtherLogic] = 5 * slope * (s.config.decode_width + other_bias);
    double total = 0.0;
    for (double v : p) total += v;
    s.component_power = p;
    s.component_area = p;
    s.total_power = total;
    samples.push_back(s);
  }
  return Dataset(std::move(samples));
}

ResourceParams fitted_params(double itlb = 1, double dtlb = 2, double other = 0.5) {
  ResourceParams p;
  p.itlb_bias = itlb;
  p.dtlb_bias = dtlb;
  p.otherlogic_bias = other;
  p.fitted = true;
  return p;
}

TEST(Resource, BiasedComponentsNeedFittedParams) {
  const auto& c = builtin_configuration("C5");
  ResourceParams unfitted;
  for (ComponentId comp : kAllComponents) {
    if (requires_bias(comp)) {
      EXPECT_THROW(eval_resource(comp, c, unfitted), InvalidArgument);
    } else {
      EXPECT_NO_THROW(eval_resource(comp, c, unfitted));
    }
  }
}

TEST(Resource, FormulasOnOneConfig) {
  const auto& c = builtin_configuration("C9");
  const ResourceParams p = fitted_params(1.5, 2.5, 0.25);
  EXPECT_EQ(eval_resource(ComponentId::kBP, c, p), 8);
  EXPECT_EQ(eval_resource(ComponentId::kITLB, c, p), 33.5);
  EXPECT_EQ(eval_resource(ComponentId::kICache, c, p), 32);
  EXPECT_EQ(eval_resource(ComponentId::kRegfile, c, p), 224);
  EXPECT_EQ(eval_resource(ComponentId::kFUPool, c, p), 1);
  EXPECT_EQ(eval_resource(ComponentId::kLSU, c, p), 64);
  EXPECT_EQ(eval_resource(ComponentId::kDTLB, c, p), 34.5);
  EXPECT_EQ(eval_resource(ComponentId::kDCache, c, p), 16);
  EXPECT_EQ(eval_resource(ComponentId::kOtherLogic, c, p), 3.25);
}

TEST(Resource, ReserveStationLookup) {
  ResourceParams p = fitted_params();
  EXPECT_EQ(eval_resource(ComponentId::kISU, builtin_configuration("C13"), p), 5);
  p.reserve_station_lookup = {{1, 12}, {2, 20}};
  EXPECT_EQ(eval_resource(ComponentId::kISU, builtin_configuration("C4"), p), 20);
  EXPECT_THROW(eval_resource(ComponentId::kISU, builtin_configuration("C13"), p), InvalidArgument);
}

TEST(Resource, BiasDriver) {
  EXPECT_EQ(bias_driver(ComponentId::kITLB), Param::kDTLBEntry);
  EXPECT_EQ(bias_driver(ComponentId::kDTLB), Param::kDTLBEntry);
  EXPECT_EQ(bias_driver(ComponentId::kOtherLogic), Param::kDecodeWidth);
  EXPECT_THROW(bias_driver(ComponentId::kROB), InvalidArgument);
}

TEST(Resource, RecoversKnownBiases) {
  const Dataset ds = linear_dataset(normal_configuration_ids(), 3.0, 7.5, 1.25);
  const ResourceParams p = fit_resource_params(ds, ResourceParams{});
  EXPECT_TRUE(p.fitted);
  EXPECT_NEAR(p.itlb_bias, 3.0, 1e-9);
  EXPECT_NEAR(p.dtlb_bias, 7.5, 1e-9);
  EXPECT_NEAR(p.otherlogic_bias, 1.25, 1e-9);
  EXPECT_EQ(p.itlb_source, BiasSource::kFitted);
  EXPECT_EQ(p.otherlogic_source, BiasSource::kFitted);
}

TEST(Resource, AreaLabelsDriveAreaFit) {
  const Dataset ds = linear_dataset(normal_configuration_ids(), 2.0, 4.0, 0.5);
  const ResourceParams p = fit_resource_params(ds, ResourceParams{}, LabelKind::kArea);
  EXPECT_NEAR(p.dtlb_bias, 4.0, 1e-9);
}

TEST(Resource, NegativeInterceptIsClamped) {
  // power = slope * (x - 2): bias would be -2.
  const Dataset ds = linear_dataset(normal_configuration_ids(), -2.0, 1.0, 1.0);
  ScopedWarningCapture cap;
  const ResourceParams p = fit_resource_params(ds, ResourceParams{});
  EXPECT_EQ(p.itlb_bias, 0.0);
  EXPECT_EQ(p.itlb_source, BiasSource::kClamped);
  EXPECT_TRUE(cap.contains("clamped"));
}

TEST(Resource, SingleDriverValueFallsBackToDefault) {
  // C1, C2, C4 all have DTLBEntry 8 and DecodeWidth in {1, 2}.
  const Dataset ds = linear_dataset({"C1", "C2", "C4"}, 3.0, 5.0, 1.0);
  ResourceParams defaults;
  defaults.itlb_bias = 9;
  defaults.dtlb_bias = 11;
  ScopedWarningCapture cap;
  const ResourceParams p = fit_resource_params(ds, defaults);
  EXPECT_EQ(p.itlb_bias, 9);
  EXPECT_EQ(p.dtlb_bias, 11);
  EXPECT_EQ(p.itlb_source, BiasSource::kDefault);
  EXPECT_EQ(p.otherlogic_source, BiasSource::kFitted);
  EXPECT_TRUE(p.fitted);
  EXPECT_TRUE(cap.contains("fewer than two distinct DTLBEntry"));
}

TEST(Resource, LookupIsCopiedFromDefaults) {
  const Dataset ds = linear_dataset(normal_configuration_ids(), 1, 1, 1);
  ResourceParams defaults;
  defaults.reserve_station_lookup = {{1, 4}, {2, 8}, {3, 12}, {4, 16}, {5, 20}};
  EXPECT_EQ(fit_resource_params(ds, defaults).reserve_station_lookup,
            defaults.reserve_station_lookup);
}

TEST(Resource, FitErrors) {
  EXPECT_THROW(fit_resource_params(Dataset{}, ResourceParams{}), InvalidArgument);
  Dataset ds = linear_dataset({"C1", "C9"}, 1, 1, 1);
  std::vector<Sample> samples = ds.samples();
  samples[0].component_power.reset();
  EXPECT_THROW(fit_resource_params(Dataset(samples), ResourceParams{}), InvariantError);
}

TEST(Resource, ParseDefaults) {
  const ResourceParams p = parse_resource_defaults(
      R"({"reserve_station_lookup": {"1": 10, "2": 18.5},
          "default_biases": {"itlb": 2, "dtlb": 3, "other_logic": 0.5}})");
  EXPECT_EQ(p.reserve_station_lookup.at(2), 18.5);
  EXPECT_EQ(p.itlb_bias, 2);
  EXPECT_EQ(p.dtlb_bias, 3);
  EXPECT_EQ(p.otherlogic_bias, 0.5);
  EXPECT_FALSE(p.fitted);
  EXPECT_EQ(parse_resource_defaults("{}"), ResourceParams{});

  EXPECT_THROW(parse_resource_defaults(R"({"reserve_station_lookup": {"x": 1}})"), ParseError);
  EXPECT_THROW(parse_resource_defaults(R"({"reserve_station_lookup": {"1": 0}})"), InvariantError);
  EXPECT_THROW(parse_resource_defaults(R"({"default_biases": {"itlb": -1}})"), InvariantError);
  EXPECT_THROW(parse_resource_defaults(R"({"biases": {}})"), ParseError);
  EXPECT_THROW(parse_resource_defaults("[1,"), ParseError);
}

TEST(Resource, LoadDefaultsFromFile) {
  test::TempDir dir("res");
  test::write_text(dir / "m.json", R"({"default_biases": {"dtlb": 4}})");
  EXPECT_EQ(load_resource_defaults(dir / "m.json").dtlb_bias, 4);
  EXPECT_THROW(load_resource_defaults(dir / "nope.json"), ParseError);
}

}  // namespace
}  // namespace panda
