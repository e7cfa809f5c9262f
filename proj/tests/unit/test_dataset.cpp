#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "support.hpp"

namespace panda {
namespace {

Sample tiny_sample(const std::string& id = "C1", const std::string& workload = "w") {
  Sample s;
  s.config = builtin_configuration(id);
  s.tech = {"tsmc40", 40, 1.1};
  s.events.workload = workload;
  s.events.baseline_cycles = 1000;
  s.events.counts["numCycles"] = 1000;
  s.events.counts["fetch_insts"] = 1500;
  PerComponent<double> parts;
  double total = 0.0;
  for (ComponentId c : kAllComponents) {
    parts[c] = 0.01 * (1 + static_cast<int>(index_of(c)));
    total += parts[c];
  }
  s.component_power = parts;
  s.total_power = total;
  s.true_cycles = 1200;
  return s;
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

TEST(Dataset, RoundTripIsExact) {
  const Dataset ds = test::small_synth(5, 2);
  std::stringstream buf;
  write_dataset(buf, ds);
  const std::string first = buf.str();
  const Dataset back = read_dataset(buf);
  EXPECT_EQ(back, ds);
  std::stringstream again;
  write_dataset(again, back);
  EXPECT_EQ(again.str(), first);
}

TEST(Dataset, FileRoundTrip) {
  test::TempDir dir("ds");
  const Dataset ds = test::small_synth(6, 1);
  save_dataset(dir / "d.jsonl", ds);
  EXPECT_EQ(load_dataset(dir / "d.jsonl"), ds);
  EXPECT_THROW(load_dataset(dir / "missing.jsonl"), ParseError);
}

TEST(Dataset, BlankLinesAreSkipped) {
  const std::string line = sample_to_json_line(tiny_sample());
  std::stringstream in("\n" + line + "\n   \n");
  EXPECT_EQ(read_dataset(in).size(), 1u);
}

TEST(Dataset, UnknownKeyReportsLine) {
  const std::string good = sample_to_json_line(tiny_sample());
  const std::string bad = replace_once(good, "\"workload\"", "\"extra\":1,\"workload\"");
  std::stringstream in(good + "\n" + bad + "\n");
  try {
    read_dataset(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Dataset, UnknownEventIsParseError) {
  const std::string line =
      replace_once(sample_to_json_line(tiny_sample()), "\"fetch_insts\"", "\"fetch_instz\"");
  EXPECT_THROW(sample_from_json_line(line), ParseError);
}

TEST(Dataset, MissingFieldIsParseError) {
  const std::string line = replace_once(sample_to_json_line(tiny_sample()), ",\"workload\":\"w\"", "");
  EXPECT_THROW(sample_from_json_line(line), ParseError);
  EXPECT_THROW(sample_from_json_line("{not json"), ParseError);
}

TEST(Dataset, WrongSchemaIsParseError) {
  const std::string line =
      replace_once(sample_to_json_line(tiny_sample()), "panda-ds-1", "panda-ds-9");
  EXPECT_THROW(sample_from_json_line(line), ParseError);
}

TEST(Dataset, SampleInvariants) {
  Sample s = tiny_sample();
  EXPECT_NO_THROW(validate(s));
  s.total_power *= 1.01;
  EXPECT_THROW(validate(s), InvariantError);

  Sample neg = tiny_sample();
  neg.total_power = -1;
  neg.component_power.reset();
  EXPECT_THROW(validate(neg), InvariantError);

  // Within the 1e-6 relative sum tolerance.
  Sample close = tiny_sample();
  close.total_power *= 1 + 1e-9;
  EXPECT_NO_THROW(validate(close));
}

TEST(Dataset, IdMustMapToOneParameterSet) {
  Sample a = tiny_sample("C1", "w1");
  Sample b = tiny_sample("C1", "w2");
  b.config.rob_entry += 1;
  EXPECT_THROW(Dataset({a, b}), InvariantError);
}

TEST(Dataset, IdsSubsetAndOrder) {
  const Dataset ds({tiny_sample("C3", "a"), tiny_sample("C1", "a"), tiny_sample("C3", "b")});
  EXPECT_EQ(ds.config_ids(), (std::vector<std::string>{"C3", "C1"}));
  EXPECT_EQ(ds.configurations().size(), 2u);
  EXPECT_TRUE(ds.contains_config("C1"));
  EXPECT_FALSE(ds.contains_config("C2"));
  const Dataset sub = ds.subset({"C3"});
  ASSERT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.samples()[1].events.workload, "b");
  EXPECT_EQ(ds.schema_version(), kDatasetSchema);
}

TEST(Split, KnownNShapeAndCoverage) {
  const auto ids = normal_configuration_ids();
  for (int n = 1; n < 15; ++n) {
    const SplitPlan plan = split_known_n(ids, n);
    ASSERT_EQ(plan.folds.size(), 15u);
    std::map<std::string, int> tested;
    for (const auto& f : plan.folds) {
      EXPECT_EQ(f.train_ids.size(), static_cast<std::size_t>(n));
      EXPECT_EQ(f.test_ids.size(), static_cast<std::size_t>(15 - n));
      std::set<std::string> all(f.train_ids.begin(), f.train_ids.end());
      for (const auto& t : f.test_ids) {
        EXPECT_TRUE(all.insert(t).second) << "overlap " << t;
        ++tested[t];
      }
      EXPECT_EQ(all.size(), 15u);
    }
    // Cyclic windows test every id equally often.
    for (const auto& id : ids) EXPECT_EQ(tested[id], 15 - n);
    EXPECT_NO_THROW(validate(plan, ids));
  }
}

TEST(Split, KnownNWindows) {
  const auto plan = split_known_n(normal_configuration_ids(), 13);
  EXPECT_EQ(plan.folds[0].test_ids, (std::vector<std::string>{"C1", "C2"}));
  EXPECT_EQ(plan.folds[14].test_ids, (std::vector<std::string>{"C15", "C1"}));
  EXPECT_THROW(split_known_n(normal_configuration_ids(), 0), InvalidArgument);
  EXPECT_THROW(split_known_n(normal_configuration_ids(), 15), InvalidArgument);
}

TEST(Split, UnknownDomain) {
  std::vector<DesignConfiguration> configs;
  for (const auto& id : normal_configuration_ids()) configs.push_back(builtin_configuration(id));
  const SplitPlan plan = split_unknown_domain(configs);
  ASSERT_EQ(plan.folds.size(), 5u);
  for (std::size_t k = 0; k < plan.folds.size(); ++k) {
    const auto& f = plan.folds[k];
    EXPECT_EQ(f.test_ids.size(), 3u);
    EXPECT_EQ(f.train_ids.size(), 12u);
    for (const auto& t : f.test_ids) {
      EXPECT_EQ(builtin_configuration(t).decode_width, static_cast<int>(k) + 1);
    }
    for (const auto& t : f.train_ids) {
      EXPECT_NE(builtin_configuration(t).decode_width, static_cast<int>(k) + 1);
    }
  }
  EXPECT_THROW(split_unknown_domain({builtin_configuration("C1"), builtin_configuration("C2")}),
               InvalidArgument);
}

TEST(Split, ValidateRejectsBadPlans) {
  const auto ids = normal_configuration_ids();
  SplitPlan overlap{{Fold{{"C1", "C2"}, {"C2", "C3"}}}};
  EXPECT_THROW(validate(overlap, ids), InvalidArgument);
  SplitPlan unknown{{Fold{{"C1"}, {"C99"}}}};
  EXPECT_THROW(validate(unknown, ids), InvalidArgument);
}

}  // namespace
}  // namespace panda
