#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panda/component.hpp"

namespace panda {

inline constexpr std::string_view kNumCycles = "numCycles";

// Canonical event registry: every per-component simulator counter (dots
// replaced by underscores, e.g. icache.overallAccesses ->
// icache_overallAccesses) followed by the extra counters consumed by the
// cycle calibrator (numCycles, idleCycles, branchPred_*,
// dcache_overallMshrMisses).
const std::vector<std::string>& event_registry();
bool is_registered_event(std::string_view name);

// Events attached to one component; OtherLogic returns the whole registry.
const std::vector<std::string>& component_events(ComponentId c);

// The ten events used as cycle-calibration features.
const std::vector<std::string>& perf_events();

// "a.b.c" -> "a_b_c".
std::string normalize_event_name(std::string_view raw);

// Workload event counters for one (design, workload) run.
struct EventVector {
  std::string workload;
  std::map<std::string, double, std::less<>> counts;
  double baseline_cycles = 0.0;
  double frequency_hz = 1e9;

  // Zero when the counter is absent.
  double count(std::string_view name) const;
  bool has(std::string_view name) const { return counts.find(name) != counts.end(); }

  bool operator==(const EventVector&) const = default;
};

// Throws ParseError for unregistered names and InvariantError for negative
// counts, a missing numCycles, or numCycles != baseline_cycles.
void validate(const EventVector& events);

}  // namespace panda
