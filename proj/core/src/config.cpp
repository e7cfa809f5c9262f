#include "panda/config.hpp"

#include <cmath>

#include "panda/error.hpp"

namespace panda {
namespace {

struct ParamInfo {
  Param param;
  std::string_view name;
  int DesignConfiguration::*member;
};

constexpr std::array<ParamInfo, kNumParams> kParamInfo = {{
    {Param::kFetchWidth, "FetchWidth", &DesignConfiguration::fetch_width},
    {Param::kDecodeWidth, "DecodeWidth", &DesignConfiguration::decode_width},
    {Param::kFetchBufferEntry, "FetchBufferEntry", &DesignConfiguration::fetch_buffer_entry},
    {Param::kRobEntry, "RobEntry", &DesignConfiguration::rob_entry},
    {Param::kIntPhyRegister, "IntPhyRegister", &DesignConfiguration::int_phy_register},
    {Param::kFpPhyRegister, "FpPhyRegister", &DesignConfiguration::fp_phy_register},
    {Param::kLDQEntry, "LDQEntry", &DesignConfiguration::ldq_entry},
    {Param::kSTQEntry, "STQEntry", &DesignConfiguration::stq_entry},
    {Param::kBranchCount, "BranchCount", &DesignConfiguration::branch_count},
    {Param::kMemIssueWidth, "MemIssueWidth", &DesignConfiguration::mem_issue_width},
    {Param::kFpIssueWidth, "FpIssueWidth", &DesignConfiguration::fp_issue_width},
    {Param::kIntIssueWidth, "IntIssueWidth", &DesignConfiguration::int_issue_width},
    {Param::kDCacheWay, "DCacheWay", &DesignConfiguration::dcache_way},
    {Param::kICacheWay, "ICacheWay", &DesignConfiguration::icache_way},
    {Param::kDTLBEntry, "DTLBEntry", &DesignConfiguration::dtlb_entry},
    {Param::kDCacheMSHR, "DCacheMSHR", &DesignConfiguration::dcache_mshr},
    {Param::kICacheFetchBytes, "ICacheFetchBytes", &DesignConfiguration::icache_fetch_bytes},
}};

constexpr std::size_t kNumBuiltins = 17;
using BuiltinRow = std::array<int, kNumBuiltins>;

// Columns: C1..C15, SP1, SP2. Rows follow Param order; the shared rows of the
// published table are repeated for each of their two fields.
constexpr std::array<BuiltinRow, kNumParams> kBuiltinTable = {{
    /* FetchWidth       */ {4, 4, 4, 4, 4, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8},
    /* DecodeWidth      */ {1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4, 5, 5, 5, 1, 5},
    /* FetchBufferEntry */ {5, 8, 16, 8, 16, 24, 18, 24, 30, 24, 32, 40, 30, 35, 40, 10, 40},
    /* RobEntry         */ {16, 32, 48, 64, 64, 80, 81, 96, 114, 112, 128, 136, 125, 130, 140, 16, 140},
    /* IntPhyRegister   */ {36, 53, 68, 64, 80, 88, 88, 110, 112, 108, 128, 136, 108, 128, 140, 36, 140},
    /* FpPhyRegister    */ {36, 48, 56, 56, 64, 72, 88, 96, 112, 108, 128, 136, 108, 128, 140, 36, 140},
    /* LDQEntry         */ {4, 8, 16, 12, 16, 20, 16, 24, 32, 24, 32, 36, 24, 32, 36, 4, 36},
    /* STQEntry         */ {4, 8, 16, 12, 16, 20, 16, 24, 32, 24, 32, 36, 24, 32, 36, 4, 36},
    /* BranchCount      */ {6, 8, 10, 10, 12, 14, 14, 16, 16, 18, 20, 20, 18, 20, 20, 6, 20},
    /* MemIssueWidth    */ {1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 2, 1, 2},
    /* FpIssueWidth     */ {1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 2, 1, 2},
    /* IntIssueWidth    */ {1, 1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 4, 5, 5, 5, 1, 5},
    /* DCacheWay        */ {2, 4, 8, 4, 4, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8, 2, 2},
    /* ICacheWay        */ {2, 4, 8, 4, 4, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8, 2, 2},
    /* DTLBEntry        */ {8, 8, 16, 8, 8, 16, 16, 16, 32, 32, 32, 32, 32, 32, 32, 8, 32},
    /* DCacheMSHR       */ {2, 2, 4, 2, 2, 4, 4, 4, 4, 4, 4, 8, 8, 8, 8, 2, 8},
    /* ICacheFetchBytes */ {2, 2, 2, 2, 2, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4},
}};

constexpr std::array<std::string_view, kNumBuiltins> kBuiltinIds = {
    "C1", "C2", "C3",  "C4",  "C5",  "C6",  "C7",  "C8", "C9",
    "C10", "C11", "C12", "C13", "C14", "C15", "SP1", "SP2",
};

std::vector<DesignConfiguration> make_builtins() {
  std::vector<DesignConfiguration> out;
  out.reserve(kNumBuiltins);
  for (std::size_t col = 0; col < kNumBuiltins; ++col) {
    DesignConfiguration c;
    c.id = std::string(kBuiltinIds[col]);
    for (std::size_t row = 0; row < kNumParams; ++row) {
      c.*(kParamInfo[row].member) = kBuiltinTable[row][col];
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

bool DesignConfiguration::same_parameters(const DesignConfiguration& other) const {
  for (const auto& info : kParamInfo) {
    if (this->*(info.member) != other.*(info.member)) return false;
  }
  return true;
}

const std::array<Param, kNumParams>& all_params() {
  static const std::array<Param, kNumParams> params = [] {
    std::array<Param, kNumParams> p{};
    for (std::size_t i = 0; i < kNumParams; ++i) p[i] = kParamInfo[i].param;
    return p;
  }();
  return params;
}

std::string_view param_name(Param p) { return kParamInfo[static_cast<std::size_t>(p)].name; }

std::optional<Param> parse_param(std::string_view name) {
  for (const auto& info : kParamInfo) {
    if (info.name == name) return info.param;
  }
  if (name == "ICacheTLBEntry" || name == "DCacheTLBEntry") return Param::kDTLBEntry;
  return std::nullopt;
}

int get_param(const DesignConfiguration& config, Param p) {
  return config.*(kParamInfo[static_cast<std::size_t>(p)].member);
}

void set_param(DesignConfiguration& config, Param p, int value) {
  config.*(kParamInfo[static_cast<std::size_t>(p)].member) = value;
}

void validate(const DesignConfiguration& config) {
  for (const auto& info : kParamInfo) {
    if (config.*(info.member) < 1) {
      throw InvariantError("configuration '" + config.id + "': " + std::string(info.name) +
                           " must be >= 1");
    }
  }
  if (config.decode_width > config.fetch_width) {
    throw InvariantError("configuration '" + config.id +
                         "': DecodeWidth must not exceed FetchWidth");
  }
}

const std::vector<DesignConfiguration>& builtin_configurations() {
  static const std::vector<DesignConfiguration> builtins = make_builtins();
  return builtins;
}

const DesignConfiguration& builtin_configuration(std::string_view id) {
  for (const auto& c : builtin_configurations()) {
    if (c.id == id) return c;
  }
  throw InvalidArgument("unknown built-in configuration '" + std::string(id) + "'");
}

std::vector<std::string> normal_configuration_ids() {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < 15; ++i) ids.emplace_back(kBuiltinIds[i]);
  return ids;
}

void validate(const TechnologyNode& node) {
  if (!(node.feature_size_nm > 0.0) || !std::isfinite(node.feature_size_nm)) {
    throw InvariantError("technology node '" + node.name + "': feature size must be positive");
  }
  if (!(node.voltage_v > 0.0) || !std::isfinite(node.voltage_v)) {
    throw InvariantError("technology node '" + node.name + "': voltage must be positive");
  }
}

}  // namespace panda
