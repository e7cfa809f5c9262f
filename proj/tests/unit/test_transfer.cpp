#include <gtest/gtest.h>

#include <sstream>

#include "panda/error.hpp"
#include "panda/evalharness.hpp"
#include "panda/log.hpp"
#include "panda/synth.hpp"
#include "panda/transfer.hpp"
#include "support.hpp"

namespace panda {
namespace {

const TechnologyNode kN28{"tsmc28", 28, 0.8};
const TechnologyNode kN40{"tsmc40", 40, 1.1};
const TechnologyNode kN65{"tsmc65", 65, 1.2};

TEST(Cv2, Factor) {
  EXPECT_NEAR(cv2_scale(1.0, kN28, kN40), (40.0 / 28.0) * (1.1 / 0.8) * (1.1 / 0.8), 1e-12);
  EXPECT_EQ(cv2_scale(0.3, kN40, kN40), 0.3);
  // Scaling there and back is the identity.
  EXPECT_NEAR(cv2_scale(cv2_scale(0.2, kN28, kN65), kN65, kN28), 0.2, 1e-15);
  EXPECT_THROW(cv2_scale(1.0, TechnologyNode{"bad", 0, 1}, kN40), InvalidArgument);
}

TEST(TransferFeatures, Layout) {
  const FeatureRow row = build_transfer_features(0.5, kN28, kN40);
  EXPECT_EQ(row.names, (std::vector<std::string>{"source_power", "feature_size_ratio",
                                                 "voltage_ratio", "cv2_scaled_power"}));
  EXPECT_EQ(row.at("source_power"), 0.5);
  EXPECT_DOUBLE_EQ(row.at("feature_size_ratio"), 40.0 / 28.0);
  EXPECT_DOUBLE_EQ(row.at("voltage_ratio"), 1.1 / 0.8);
  EXPECT_DOUBLE_EQ(row.at("cv2_scaled_power"), cv2_scale(0.5, kN28, kN40));
}

TEST(TransferSample, Validation) {
  EXPECT_NO_THROW(validate(TransferSample{"d", kN28, kN40, 0.1, 0.2}));
  EXPECT_THROW(validate(TransferSample{"d", kN28, kN40, 0.0, 0.2}), InvariantError);
  EXPECT_THROW(validate(TransferSample{"d", kN28, kN28, 0.1, 0.1}), InvariantError);
}

TEST(Transfer, LearnsSystematicDeviation) {
  MultiTechSpec spec;
  spec.seed = 4;
  const auto samples = generate_multitech(spec, default_nodes());
  std::vector<TransferSample> train, test;
  for (const auto& s : samples) {
    const int id = std::stoi(s.design_id.substr(1));
    (id <= 16 ? train : test).push_back(s);
  }
  const TransferModel m = train_transfer(train, TrainOptions{});
  std::vector<double> y, learned, naive;
  for (const auto& s : test) {
    y.push_back(s.target_power);
    learned.push_back(predict_transferred_power(m, s.source_power, s.source, s.target));
    naive.push_back(cv2_scale(s.source_power, s.source, s.target));
  }
  EXPECT_LT(mape(y, learned), mape(y, naive));
}

TEST(Transfer, SinglePairWarnsAndTooFewThrows) {
  std::vector<TransferSample> one_pair = {{"a", kN28, kN40, 0.1, 0.25}, {"b", kN28, kN40, 0.2, 0.5}};
  ScopedWarningCapture cap;
  const TransferModel m = train_transfer(one_pair, test::fast_options());
  EXPECT_FALSE(cap.messages().empty());
  EXPECT_NEAR(predict_transferred_power(m, 0.1, kN28, kN40), 0.25, 1e-12);
  EXPECT_THROW(train_transfer({one_pair[0]}, test::fast_options()), InvalidArgument);
  EXPECT_THROW(predict_transferred_power(TransferModel{}, 0.1, kN28, kN40), ModelError);
}

TEST(Transfer, RoundTripAndCorpusIo) {
  MultiTechSpec spec;
  spec.designs = 5;
  const auto samples = generate_multitech(spec, default_nodes());
  const TransferModel m = train_transfer(samples, test::fast_options());
  const TransferModel back = deserialize_transfer(serialize(m));
  EXPECT_EQ(back, m);

  std::stringstream buf;
  write_transfer_samples(buf, samples);
  EXPECT_EQ(read_transfer_samples(buf), samples);

  test::TempDir dir("xfer");
  save_transfer_samples(dir / "t.jsonl", samples);
  EXPECT_EQ(load_transfer_samples(dir / "t.jsonl"), samples);

  std::stringstream bad(R"({"design_id":"x","source":{"name":"a","feature_size_nm":28,"voltage_v":0.8}})");
  EXPECT_THROW(read_transfer_samples(bad), ParseError);
}

}  // namespace
}  // namespace panda
