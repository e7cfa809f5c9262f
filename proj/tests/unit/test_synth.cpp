#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "panda/baselines.hpp"
#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/evalharness.hpp"
#include "panda/log.hpp"
#include "panda/synth.hpp"
#include "support.hpp"

namespace panda {
namespace {

std::string dump(const Dataset& ds) {
  std::ostringstream os;
  write_dataset(os, ds);
  return os.str();
}

TEST(Synth, DefaultShape) {
  const Dataset ds = generate(default_synth_spec(7));
  EXPECT_EQ(ds.size(), 120u);
  EXPECT_EQ(ds.config_ids(), normal_configuration_ids());
  EXPECT_EQ(default_workloads().size(), 8u);
  const Dataset sp = generate(default_synth_spec(7, true));
  EXPECT_EQ(sp.size(), 136u);
  EXPECT_TRUE(sp.contains_config("SP2"));
  for (const auto& s : ds.samples()) {
    ASSERT_TRUE(s.component_power && s.component_area && s.true_cycles);
    EXPECT_EQ(s.events.count("numCycles"), s.events.baseline_cycles);
    for (const auto& name : event_registry()) EXPECT_TRUE(s.events.has(name)) << name;
  }
}

TEST(Synth, DeterministicBytes) {
  EXPECT_EQ(dump(generate(default_synth_spec(7))), dump(generate(default_synth_spec(7))));
  EXPECT_NE(dump(generate(default_synth_spec(7))), dump(generate(default_synth_spec(8))));
}

TEST(Synth, RunsIndependentOfOtherConfigs) {
  SynthSpec full = default_synth_spec(9);
  SynthSpec reordered = full;
  std::reverse(reordered.configs.begin(), reordered.configs.end());
  reordered.configs.resize(4);
  const Dataset a = generate(full), b = generate(reordered);
  for (const auto& s : b.samples()) {
    bool found = false;
    for (const auto& t : a.samples()) {
      if (t.config.id == s.config.id && t.events.workload == s.events.workload) {
        EXPECT_EQ(t, s);
        found = true;
      }
    }
    EXPECT_TRUE(found);
  }
}

TEST(Synth, ComponentSumIsExact) {
  for (const auto& s : generate(default_synth_spec(3)).samples()) {
    double sum = 0.0;
    for (double v : *s.component_power) sum += v;
    EXPECT_EQ(sum, s.total_power);
  }
}

TEST(Synth, PowerMonotoneInResourceWithoutNoise) {
  SynthSpec spec = default_synth_spec(5);
  spec.noise_rel = 0.0;
  make_affine(spec);
  const SynthOracle oracle(spec);
  DesignConfiguration small = builtin_configuration("C8");
  DesignConfiguration big = small;
  big.rob_entry *= 2;
  big.ldq_entry *= 2;
  big.int_phy_register += 16;
  const auto a = oracle.run(small, 0), b = oracle.run(big, 0);
  EXPECT_LT(a.power[ComponentId::kROB], b.power[ComponentId::kROB]);
  EXPECT_LT(a.power[ComponentId::kLSU], b.power[ComponentId::kLSU]);
  EXPECT_LT(a.power[ComponentId::kRegfile], b.power[ComponentId::kRegfile]);
}

TEST(Synth, AffineLawsAreExactlyLinear) {
  SynthSpec spec = default_synth_spec(11);
  spec.noise_rel = 0.0;
  make_affine(spec);
  for (const auto& law : spec.component_laws) {
    EXPECT_EQ(law.nonlinearity, 1.0);
    EXPECT_EQ(law.activity_coef, 0.0);
  }
  const Dataset ds = generate(spec);
  ScopedWarningCapture quiet;
  const auto m = train_analytical(ds, ResourceParams{});
  std::vector<double> y, p;
  for (const auto& s : ds.samples()) {
    y.push_back(s.total_power);
    p.push_back(predict_power(m, s.config, s.events).total);
  }
  EXPECT_LT(mape(y, p), 1e-6);
}

TEST(Synth, OracleResourceUsesTrueBiases) {
  const SynthSpec spec = default_synth_spec(1);
  const auto& c = builtin_configuration("C4");
  EXPECT_EQ(oracle_resource(spec, ComponentId::kDTLB, c), c.dtlb_entry + spec.dtlb_bias);
  EXPECT_EQ(oracle_resource(spec, ComponentId::kROB, c), c.rob_entry);
}

TEST(Synth, DrivingEventsAreRegistered) {
  for (ComponentId c : kAllComponents) EXPECT_TRUE(is_registered_event(driving_event(c)));
}

TEST(Synth, SpecValidation) {
  SynthSpec spec = default_synth_spec(1);
  EXPECT_NO_THROW(spec.validate());
  SynthSpec bad = spec;
  bad.noise_rel = -0.1;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = spec;
  bad.configs.clear();
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = spec;
  bad.workloads.clear();
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Synth, SpecJsonRoundTrip) {
  SynthSpec spec = default_synth_spec(21, true);
  spec.noise_rel = 0.01;
  make_affine(spec);
  const SynthSpec back = parse_synth_spec(synth_spec_to_json(spec));
  EXPECT_EQ(back, spec);
}

TEST(Synth, SpecJsonPartial) {
  const SynthSpec spec = parse_synth_spec(R"({"seed": 3, "configs": ["C1", "C15"], "noise_rel": 0})");
  EXPECT_EQ(spec.seed, 3u);
  ASSERT_EQ(spec.configs.size(), 2u);
  EXPECT_EQ(spec.configs[1].id, "C15");
  EXPECT_EQ(spec.noise_rel, 0.0);
  EXPECT_EQ(spec.workloads, default_workloads());
  EXPECT_THROW(parse_synth_spec(R"({"configs": ["C99"]})"), Error);
  EXPECT_THROW(parse_synth_spec(R"({"sed": 3})"), ParseError);
}

TEST(MultiTech, ShapeAndDeterminism) {
  MultiTechSpec spec;
  const auto nodes = default_nodes();
  ASSERT_EQ(nodes.size(), 3u);
  const auto a = generate_multitech(spec, nodes);
  EXPECT_EQ(a.size(), static_cast<std::size_t>(spec.designs) * 6);
  EXPECT_EQ(a, generate_multitech(spec, nodes));
  std::set<std::string> designs;
  for (const auto& s : a) {
    EXPECT_NO_THROW(validate(s));
    designs.insert(s.design_id);
  }
  EXPECT_EQ(designs.size(), static_cast<std::size_t>(spec.designs));
  EXPECT_THROW(generate_multitech(spec, {nodes[0]}), InvalidArgument);
}

TEST(MultiTech, PairsAreConsistent) {
  // Each design has one power per node, so A->B and B->A use the same two values.
  const auto samples = generate_multitech(MultiTechSpec{}, default_nodes());
  for (const auto& s : samples) {
    for (const auto& t : samples) {
      if (s.design_id == t.design_id && s.source == t.target && s.target == t.source) {
        EXPECT_EQ(s.source_power, t.target_power);
      }
    }
  }
}

}  // namespace
}  // namespace panda
