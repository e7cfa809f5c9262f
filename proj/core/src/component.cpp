#include "panda/component.hpp"

namespace panda {
namespace {

constexpr std::array<std::string_view, kNumComponents> kNames = {
    "BP",  "IFU", "ITLB",   "ICache", "RNU",  "ROB",       "ISU",
    "Regfile", "FUPool", "LSU", "DTLB", "DCache", "OtherLogic",
};

}  // namespace

std::string_view component_name(ComponentId c) { return kNames[index_of(c)]; }

std::optional<ComponentId> parse_component(std::string_view name) {
  for (ComponentId c : kAllComponents) {
    if (kNames[index_of(c)] == name) return c;
  }
  return std::nullopt;
}

CpuPart cpu_part(ComponentId c) {
  switch (c) {
    case ComponentId::kBP:
    case ComponentId::kIFU:
    case ComponentId::kITLB:
    case ComponentId::kICache:
      return CpuPart::kFrontend;
    case ComponentId::kRNU:
    case ComponentId::kROB:
    case ComponentId::kISU:
    case ComponentId::kRegfile:
    case ComponentId::kFUPool:
      return CpuPart::kExecution;
    case ComponentId::kLSU:
    case ComponentId::kDTLB:
    case ComponentId::kDCache:
      return CpuPart::kMemAccess;
    case ComponentId::kOtherLogic:
      return CpuPart::kOtherLogic;
  }
  return CpuPart::kOtherLogic;
}

std::string_view cpu_part_name(CpuPart part) {
  switch (part) {
    case CpuPart::kFrontend:
      return "Frontend";
    case CpuPart::kExecution:
      return "Execution";
    case CpuPart::kMemAccess:
      return "MemAccess";
    case CpuPart::kOtherLogic:
      return "OtherLogic";
  }
  return "OtherLogic";
}

}  // namespace panda
