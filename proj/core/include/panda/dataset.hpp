#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "panda/component.hpp"
#include "panda/config.hpp"
#include "panda/events.hpp"

namespace panda {

inline constexpr std::string_view kDatasetSchema = "panda-ds-1";

// One labeled (design, workload, technology) record.
struct Sample {
  DesignConfiguration config;
  TechnologyNode tech;
  EventVector events;
  double total_power = 0.0;  // W
  std::optional<PerComponent<double>> component_power;  // W
  std::optional<double> true_cycles;
  std::optional<PerComponent<double>> component_area;  // um^2

  bool operator==(const Sample&) const = default;
};

// Throws InvariantError for negative labels or a component breakdown that
// does not sum to total_power within 1e-6 relative.
void validate(const Sample& sample);

class Dataset {
 public:
  Dataset() = default;
  // Validates every sample and the id -> parameters consistency rule.
  explicit Dataset(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::string& schema_version() const { return schema_version_; }

  // Distinct config ids in order of first appearance.
  std::vector<std::string> config_ids() const;
  // Distinct configurations in order of first appearance.
  std::vector<DesignConfiguration> configurations() const;
  bool contains_config(std::string_view id) const;

  // Samples whose config id is in `ids`, preserving dataset order.
  Dataset subset(const std::vector<std::string>& ids) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<Sample> samples_;
  std::string schema_version_{kDatasetSchema};
};

// JSON-lines I/O. Unknown keys, unknown event names, and missing required
// fields raise ParseError (with the 1-based line number); invariant
// violations raise InvariantError naming the sample.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

std::string sample_to_json_line(const Sample& sample);
Sample sample_from_json_line(std::string_view line);

struct Fold {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;

  bool operator==(const Fold&) const = default;
};

struct SplitPlan {
  std::vector<Fold> folds;

  bool operator==(const SplitPlan&) const = default;
};

// Known-n protocol over an ordered id list (normally C1..C15): fold k tests
// the cyclic window of size ids.size()-n starting at position k and trains
// on the remaining n ids. Throws InvalidArgument unless 1 <= n < ids.size().
SplitPlan split_known_n(const std::vector<std::string>& config_ids, int n);

// Unknown-domain protocol: one fold per distinct DecodeWidth (ascending);
// that domain is tested, all others train. Throws InvalidArgument for fewer
// than two domains.
SplitPlan split_unknown_domain(const std::vector<DesignConfiguration>& configs);

// Throws InvalidArgument if folds overlap internally or name ids outside
// `known_ids`.
void validate(const SplitPlan& plan, const std::vector<std::string>& known_ids);

}  // namespace panda
