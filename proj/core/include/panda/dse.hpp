#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "panda/baselines.hpp"
#include "panda/dataset.hpp"
#include "panda/quality.hpp"
#include "panda/synth.hpp"

namespace panda {

// One enumeration axis. Every listed parameter takes the same value, which
// covers tied pairs such as LDQEntry/STQEntry.
struct GridAxis {
  std::vector<Param> params;
  std::vector<int> values;
  bool operator==(const GridAxis&) const = default;
};

enum class RuleOp : std::uint8_t { kLe, kLt, kGe, kGt, kEq, kNe };

struct RuleOperand {
  std::optional<Param> param;  // constant when absent
  int constant = 0;
  bool operator==(const RuleOperand&) const = default;
};

// "A <= B" style comparison between parameters or integers.
struct CouplingRule {
  RuleOperand lhs;
  RuleOp op = RuleOp::kLe;
  RuleOperand rhs;

  bool holds(const DesignConfiguration& config) const;
  std::string to_string() const;
  bool operator==(const CouplingRule&) const = default;
};

// Throws InvalidArgument for malformed text or unknown parameter names.
CouplingRule parse_rule(std::string_view text);

struct DesignSpace {
  DesignConfiguration base;  // values of parameters without an axis
  std::vector<GridAxis> axes;
  std::vector<CouplingRule> rules;

  // Product of the axis sizes, before filtering.
  std::size_t grid_size() const;
  // Throws InvalidArgument for empty axes or a parameter on two axes.
  void validate() const;
};

// Lexicographic over the axes (last axis fastest), keeping configurations that
// satisfy every rule and the configuration invariants. Ids are "D<n>" with n
// the 1-based position in the unfiltered grid. Throws InvalidArgument when
// nothing survives.
std::vector<DesignConfiguration> enumerate(const DesignSpace& space);

// Space file:
//   {"base": "C15" | {config}, "axes": [{"params": [...], "values": [...]}],
//    "rules": ["DecodeWidth<=FetchWidth", ...]}
DesignSpace parse_design_space(std::string_view json_text);

// The grid used by the exploration study: DecodeWidth 1..5, FetchWidth {4,8},
// RobEntry {32,64,96,128}, Int/FpPhyRegister {64,96,128}, LDQ/STQEntry
// {8,16,24,32}, IntIssueWidth 1..4 <= DecodeWidth, D/ICacheWay {4,8},
// Mem/FpIssueWidth {1,2}, other parameters from C15.
DesignSpace default_design_space();

// Supplies one event vector per workload for any configuration; every call
// returns the same workloads in the same order.
class EventsProvider {
 public:
  virtual ~EventsProvider() = default;
  virtual std::vector<EventVector> events_for(const DesignConfiguration& config) const = 0;
};

// Runs the synthetic oracle's event model.
class SynthEventsProvider : public EventsProvider {
 public:
  explicit SynthEventsProvider(SynthSpec spec);
  std::vector<EventVector> events_for(const DesignConfiguration& config) const override;

 private:
  SynthOracle oracle_;
};

// Reuses the event vectors of the nearest dataset configuration (Euclidean
// distance over log2 parameter values; ties go to the earlier config).
class DatasetEventsProvider : public EventsProvider {
 public:
  explicit DatasetEventsProvider(const Dataset& dataset);
  std::vector<EventVector> events_for(const DesignConfiguration& config) const override;

 private:
  std::vector<DesignConfiguration> configs_;
  std::vector<std::vector<EventVector>> events_;
};

struct DseCandidate {
  DesignConfiguration config;
  double predicted_power = 0.0;  // W, mean over workloads
  double predicted_perf = 0.0;   // mean reference_cycles / predicted_cycles
  std::size_t index = 0;         // enumeration position
};

struct DseResult {
  std::vector<DseCandidate> ranked;  // perf descending, ties by enumeration order
  double constraint = 0.0;
  double tolerance = 0.0;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
};

struct ExploreOptions {
  double constraint = 0.8;  // W
  double tolerance = 0.0;
  std::size_t top_k = 10;   // 0 keeps every feasible candidate
  int jobs = 1;
  DesignConfiguration reference = builtin_configuration("C1");
};

// Scores every enumerated config and keeps those with predicted power <=
// constraint * (1 + tolerance). Throws InvalidArgument when none qualifies.
DseResult explore(const DesignSpace& space, const AnyPowerModel& power, const PerfCalibrator& perf,
                  const EventsProvider& events, const ExploreOptions& options);

// Scores a single configuration the way explore() does.
DseCandidate score_candidate(const DesignConfiguration& config, const AnyPowerModel& power,
                             const PerfCalibrator& perf, const EventsProvider& events,
                             const std::vector<double>& reference_cycles);

void write_dse_csv(std::ostream& out, const DseResult& result);

}  // namespace panda
