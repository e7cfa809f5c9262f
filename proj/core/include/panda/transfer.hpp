#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "panda/config.hpp"
#include "panda/regressor.hpp"

namespace panda {

// Measured power of one small design at two technology nodes.
struct TransferSample {
  std::string design_id;
  TechnologyNode source;
  TechnologyNode target;
  double source_power = 0.0;  // W
  double target_power = 0.0;  // W
  bool operator==(const TransferSample&) const = default;
};

// Throws InvariantError for non-positive powers or identical nodes.
void validate(const TransferSample& sample);

// power * (fs_t / fs_s) * (v_t / v_s)^2. Throws InvalidArgument for
// non-positive node parameters.
double cv2_scale(double power, const TechnologyNode& source, const TechnologyNode& target);

// source_power, feature_size_ratio, voltage_ratio, cv2_scaled_power.
FeatureRow build_transfer_features(double source_power, const TechnologyNode& source,
                                   const TechnologyNode& target);

// A single regressor serving every node pair; label = target / source power.
struct TransferModel {
  BoostedEnsemble ensemble;
  bool trained = false;
  bool operator==(const TransferModel&) const = default;
};

// Needs at least two samples. Warns when all samples share one node pair.
TransferModel train_transfer(const std::vector<TransferSample>& samples, const TrainOptions& opts);

// source_prediction * predicted ratio, floored at 0.
double predict_transferred_power(const TransferModel& model, double source_prediction,
                                 const TechnologyNode& source, const TechnologyNode& target);

inline constexpr std::string_view kTransferFormat = "panda-xfer-1";

std::string serialize(const TransferModel& model);
TransferModel deserialize_transfer(std::string_view bytes);

// JSON-lines corpus: {"design_id", "source", "target", "source_power_w",
// "target_power_w"} per line.
std::vector<TransferSample> read_transfer_samples(std::istream& in);
std::vector<TransferSample> load_transfer_samples(const std::filesystem::path& path);
void write_transfer_samples(std::ostream& out, const std::vector<TransferSample>& samples);
void save_transfer_samples(const std::filesystem::path& path,
                           const std::vector<TransferSample>& samples);

}  // namespace panda
