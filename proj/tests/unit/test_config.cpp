#include <gtest/gtest.h>

#include <set>

#include "panda/component.hpp"
#include "panda/config.hpp"
#include "panda/error.hpp"
#include "panda/events.hpp"

namespace panda {
namespace {

TEST(Component, NamesRoundTrip) {
  std::set<std::string_view> seen;
  for (ComponentId c : kAllComponents) {
    const auto name = component_name(c);
    EXPECT_TRUE(seen.insert(name).second) << name;
    ASSERT_TRUE(parse_component(name).has_value());
    EXPECT_EQ(*parse_component(name), c);
  }
  EXPECT_EQ(seen.size(), kNumComponents);
  EXPECT_FALSE(parse_component("L2Cache").has_value());
}

TEST(Component, CpuParts) {
  EXPECT_EQ(cpu_part(ComponentId::kBP), CpuPart::kFrontend);
  EXPECT_EQ(cpu_part(ComponentId::kICache), CpuPart::kFrontend);
  EXPECT_EQ(cpu_part(ComponentId::kRegfile), CpuPart::kExecution);
  EXPECT_EQ(cpu_part(ComponentId::kFUPool), CpuPart::kExecution);
  EXPECT_EQ(cpu_part(ComponentId::kDCache), CpuPart::kMemAccess);
  EXPECT_EQ(cpu_part(ComponentId::kOtherLogic), CpuPart::kOtherLogic);
  EXPECT_EQ(cpu_part_name(CpuPart::kMemAccess), "MemAccess");
}

TEST(Config, ParamNamesAndAliases) {
  for (Param p : all_params()) {
    ASSERT_TRUE(parse_param(param_name(p)).has_value());
    EXPECT_EQ(*parse_param(param_name(p)), p);
  }
  EXPECT_EQ(parse_param("ICacheTLBEntry"), Param::kDTLBEntry);
  EXPECT_EQ(parse_param("DCacheTLBEntry"), Param::kDTLBEntry);
  EXPECT_FALSE(parse_param("L2Size").has_value());
}

TEST(Config, GetSetCoversEveryParam) {
  DesignConfiguration c;
  int v = 2;
  for (Param p : all_params()) set_param(c, p, v++);
  v = 2;
  for (Param p : all_params()) EXPECT_EQ(get_param(c, p), v++);
}

TEST(Config, BuiltinsSpotChecks) {
  const auto& all = builtin_configurations();
  ASSERT_EQ(all.size(), 17u);
  EXPECT_EQ(all.front().id, "C1");
  EXPECT_EQ(all[14].id, "C15");
  EXPECT_EQ(all[15].id, "SP1");
  EXPECT_EQ(all[16].id, "SP2");

  const auto& c9 = builtin_configuration("C9");
  EXPECT_EQ(c9.decode_width, 3);
  EXPECT_EQ(c9.rob_entry, 114);
  EXPECT_EQ(c9.ldq_entry, 32);
  EXPECT_EQ(c9.stq_entry, 32);
  EXPECT_EQ(c9.mem_issue_width, 2);
  EXPECT_EQ(c9.fp_issue_width, 2);
  EXPECT_EQ(c9.dtlb_entry, 32);

  // SP1 is the small core with a large front end, SP2 the large core with
  // small caches.
  const auto& sp1 = builtin_configuration("SP1");
  EXPECT_EQ(sp1.fetch_width, 8);
  EXPECT_EQ(sp1.decode_width, 1);
  const auto& sp2 = builtin_configuration("SP2");
  EXPECT_EQ(sp2.dcache_way, 2);
  EXPECT_EQ(sp2.decode_width, 5);

  for (const auto& c : all) EXPECT_NO_THROW(validate(c)) << c.id;
  EXPECT_THROW(builtin_configuration("C16"), InvalidArgument);
  EXPECT_EQ(normal_configuration_ids().size(), 15u);
}

TEST(Config, ValidateRejectsBadValues) {
  DesignConfiguration c = builtin_configuration("C4");
  c.rob_entry = 0;
  EXPECT_THROW(validate(c), InvariantError);
  c = builtin_configuration("C4");
  c.decode_width = c.fetch_width + 1;
  EXPECT_THROW(validate(c), InvariantError);
}

TEST(Config, SameParametersIgnoresId) {
  DesignConfiguration a = builtin_configuration("C3");
  DesignConfiguration b = a;
  b.id = "other";
  EXPECT_TRUE(a.same_parameters(b));
  EXPECT_FALSE(a == b);
  b.rob_entry += 1;
  EXPECT_FALSE(a.same_parameters(b));
}

TEST(Config, TechnologyNodeValidation) {
  EXPECT_NO_THROW(validate(TechnologyNode{"n40", 40, 1.1}));
  EXPECT_THROW(validate(TechnologyNode{"n40", 0, 1.1}), Error);
  EXPECT_THROW(validate(TechnologyNode{"n40", 40, -1}), Error);
}

TEST(Events, RegistryIsUniqueAndUnderscored) {
  const auto& reg = event_registry();
  std::set<std::string> seen(reg.begin(), reg.end());
  EXPECT_EQ(seen.size(), reg.size());
  for (const auto& e : reg) EXPECT_EQ(e.find('.'), std::string::npos) << e;
  EXPECT_TRUE(is_registered_event("icache_overallAccesses"));
  EXPECT_TRUE(is_registered_event(kNumCycles));
  EXPECT_FALSE(is_registered_event("icache.overallAccesses"));
  for (const auto& e : perf_events()) EXPECT_TRUE(is_registered_event(e)) << e;
  EXPECT_EQ(perf_events().size(), 10u);
}

TEST(Events, ComponentEventsAreRegistered) {
  for (ComponentId c : kAllComponents) {
    EXPECT_FALSE(component_events(c).empty());
    for (const auto& e : component_events(c)) EXPECT_TRUE(is_registered_event(e)) << e;
  }
  EXPECT_EQ(component_events(ComponentId::kOtherLogic), event_registry());
}

TEST(Events, NormalizeName) {
  EXPECT_EQ(normalize_event_name("icache.overallAccesses"), "icache_overallAccesses");
  EXPECT_EQ(normalize_event_name("a.b.c"), "a_b_c");
  EXPECT_EQ(normalize_event_name("plain"), "plain");
}

TEST(Events, Validation) {
  EventVector ev;
  ev.workload = "w";
  ev.baseline_cycles = 100;
  ev.counts["numCycles"] = 100;
  EXPECT_NO_THROW(validate(ev));
  EXPECT_EQ(ev.count("fetch_insts"), 0.0);

  EventVector unknown = ev;
  unknown.counts["bogus_counter"] = 1;
  EXPECT_THROW(validate(unknown), ParseError);

  EventVector negative = ev;
  negative.counts["fetch_insts"] = -1;
  EXPECT_THROW(validate(negative), InvariantError);

  EventVector mismatch = ev;
  mismatch.baseline_cycles = 99;
  EXPECT_THROW(validate(mismatch), InvariantError);

  EventVector missing = ev;
  missing.counts.erase("numCycles");
  EXPECT_THROW(validate(missing), InvariantError);
}

}  // namespace
}  // namespace panda
