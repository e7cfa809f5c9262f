#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace panda {

// Architecture knobs of one design point. Paired knobs that the built-in
// table lists on a single row (LDQ/STQ entries, Mem/Fp issue width,
// D/I-cache ways) are kept as separate fields.
//
// The I-TLB and D-TLB entry counts are both supplied by `dtlb_entry`;
// "ICacheTLBEntry" and "DCacheTLBEntry" are accepted as aliases of
// "DTLBEntry" by parse_param().
struct DesignConfiguration {
  std::string id;
  int fetch_width = 1;
  int decode_width = 1;
  int fetch_buffer_entry = 1;
  int rob_entry = 1;
  int int_phy_register = 1;
  int fp_phy_register = 1;
  int ldq_entry = 1;
  int stq_entry = 1;
  int branch_count = 1;
  int mem_issue_width = 1;
  int fp_issue_width = 1;
  int int_issue_width = 1;
  int dcache_way = 1;
  int icache_way = 1;
  int dtlb_entry = 1;
  int dcache_mshr = 1;
  int icache_fetch_bytes = 1;

  bool operator==(const DesignConfiguration&) const = default;
  // Equality of parameter values only; ignores `id`.
  bool same_parameters(const DesignConfiguration& other) const;
};

enum class Param : std::uint8_t {
  kFetchWidth,
  kDecodeWidth,
  kFetchBufferEntry,
  kRobEntry,
  kIntPhyRegister,
  kFpPhyRegister,
  kLDQEntry,
  kSTQEntry,
  kBranchCount,
  kMemIssueWidth,
  kFpIssueWidth,
  kIntIssueWidth,
  kDCacheWay,
  kICacheWay,
  kDTLBEntry,
  kDCacheMSHR,
  kICacheFetchBytes,
};

inline constexpr std::size_t kNumParams = 17;

// All parameters in canonical order (the order of the built-in table).
const std::array<Param, kNumParams>& all_params();

// External name, e.g. "DecodeWidth".
std::string_view param_name(Param p);
// Accepts canonical names plus the TLB aliases.
std::optional<Param> parse_param(std::string_view name);

int get_param(const DesignConfiguration& config, Param p);
void set_param(DesignConfiguration& config, Param p, int value);

// Throws InvariantError unless every value is >= 1 and
// DecodeWidth <= FetchWidth.
void validate(const DesignConfiguration& config);

// C1..C15 followed by SP1 and SP2.
const std::vector<DesignConfiguration>& builtin_configurations();
// Throws InvalidArgument for unknown ids.
const DesignConfiguration& builtin_configuration(std::string_view id);
// Ids of the fifteen normal configurations, C1..C15.
std::vector<std::string> normal_configuration_ids();

struct TechnologyNode {
  std::string name;
  double feature_size_nm = 0.0;
  double voltage_v = 0.0;

  bool operator==(const TechnologyNode&) const = default;
};

void validate(const TechnologyNode& node);

}  // namespace panda
