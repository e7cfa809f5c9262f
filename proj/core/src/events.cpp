#include "panda/events.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "panda/error.hpp"

namespace panda {
namespace {

// Raw simulator names per component, in published order.
const std::vector<std::vector<std::string_view>>& raw_component_events() {
  static const std::vector<std::vector<std::string_view>> table = {
      /* BP */ {"BTBLookups", "condPredicted", "condIncorrect", "commit.branches"},
      /* IFU */
      {"fetch.insts", "fetch.branches", "fetch.cycles", "numRefs", "numStoreInsts", "numInsts",
       "decode.runCycles", "decode.blockedCycles", "decode.decodedInsts", "numBranches",
       "intInstQueueReads", "intInstQueueWrites", "intInstQueueWakeupAccesses",
       "fpInstQueueReads", "fpInstQueueWrites", "fpInstQueueWakeupAccesses"},
      /* ITLB */ {"itb.accesses", "itb.misses"},
      /* ICache */
      {"icache.overallAccesses", "icache.overallMisses", "icache.ReadReq.mshrHits",
       "icache.ReadReq.mshrMisses", "icache.tagAccesses"},
      /* RNU */
      {"intLookups", "renamedOperands", "fpLookups", "renamedInsts", "runCycles", "blockCycles",
       "committedMaps"},
      /* ROB */ {"rob.reads", "rob.writes"},
      /* ISU */
      {"IssuedMemRead", "IssuedMemWrite", "IssuedFloatMemRead", "IssuedFloatMemWrite",
       "IssuedIntAlu", "IssuedIntMult", "IssuedIntDiv", "IssuedFloatMult", "IssuedFloatDiv"},
      /* Regfile */
      {"intRegfileReads", "fpRegfileReads", "intRegfileWrites", "fpRegfileWrites",
       "functionCalls"},
      /* FUPool */ {"intAluAccesses", "fpAluAccesses"},
      /* LSU */ {"MemRead", "InstPrefetch", "MemWrite"},
      /* DTLB */ {"dtb.accesses", "dtb.misses"},
      /* DCache */
      {"dcache.ReadReq.accesses", "dcache.WriteReq.accesses", "dcache.ReadReq.misses",
       "dcache.WriteReq.misses", "dcache.overallMisses", "dcache.MshrHits", "dcache.MshrMisses",
       "dcache.tagAccesses"},
  };
  return table;
}

constexpr std::string_view kExtraEvents[] = {
    "numCycles", "idleCycles", "branchPred.condPredicted", "branchPred.condIncorrect",
    "dcache.overallMshrMisses",
};

std::vector<std::vector<std::string>> build_component_events() {
  std::vector<std::vector<std::string>> out;
  for (const auto& raw : raw_component_events()) {
    std::vector<std::string> names;
    for (auto n : raw) names.push_back(normalize_event_name(n));
    out.push_back(std::move(names));
  }
  return out;
}

}  // namespace

std::string normalize_event_name(std::string_view raw) {
  std::string out(raw);
  std::replace(out.begin(), out.end(), '.', '_');
  return out;
}

const std::vector<std::string>& event_registry() {
  static const std::vector<std::string> registry = [] {
    std::vector<std::string> names;
    for (const auto& comp : build_component_events()) {
      names.insert(names.end(), comp.begin(), comp.end());
    }
    for (auto n : kExtraEvents) names.push_back(normalize_event_name(n));
    return names;
  }();
  return registry;
}

bool is_registered_event(std::string_view name) {
  static const std::unordered_set<std::string_view> lookup = [] {
    std::unordered_set<std::string_view> s;
    for (const auto& n : event_registry()) s.insert(n);
    return s;
  }();
  return lookup.count(name) != 0;
}

const std::vector<std::string>& component_events(ComponentId c) {
  static const std::vector<std::vector<std::string>> table = build_component_events();
  if (c == ComponentId::kOtherLogic) return event_registry();
  return table[index_of(c)];
}

const std::vector<std::string>& perf_events() {
  static const std::vector<std::string> events = {
      "numCycles",
      "idleCycles",
      "branchPred_condPredicted",
      "branchPred_condIncorrect",
      "icache_overallMisses",
      "icache_ReadReq_mshrMisses",
      "dcache_ReadReq_misses",
      "dcache_WriteReq_misses",
      "dcache_overallMisses",
      "dcache_overallMshrMisses",
  };
  return events;
}

double EventVector::count(std::string_view name) const {
  auto it = counts.find(name);
  return it == counts.end() ? 0.0 : it->second;
}

void validate(const EventVector& events) {
  for (const auto& [name, value] : events.counts) {
    if (!is_registered_event(name)) {
      throw ParseError("workload '" + events.workload + "': unknown event name '" + name + "'");
    }
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw InvariantError("workload '" + events.workload + "': event '" + name +
                           "' must be a non-negative count");
    }
  }
  if (!(events.baseline_cycles >= 0.0) || !std::isfinite(events.baseline_cycles)) {
    throw InvariantError("workload '" + events.workload +
                         "': baseline_cycles must be non-negative");
  }
  auto it = events.counts.find(kNumCycles);
  if (it == events.counts.end()) {
    throw InvariantError("workload '" + events.workload + "': events must include numCycles");
  }
  if (it->second != events.baseline_cycles) {
    throw InvariantError("workload '" + events.workload +
                         "': numCycles must equal baseline_cycles");
  }
  if (!(events.frequency_hz > 0.0) || !std::isfinite(events.frequency_hz)) {
    throw InvariantError("workload '" + events.workload + "': frequency_hz must be positive");
  }
}

}  // namespace panda
