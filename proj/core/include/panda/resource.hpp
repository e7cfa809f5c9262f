#pragma once

#include <filesystem>
#include <map>
#include <optional>

#include "panda/component.hpp"
#include "panda/config.hpp"

namespace panda {

class Dataset;

// Where a bias value came from.
enum class BiasSource : std::uint8_t {
  kDefault,   // copied from the defaults (not yet fitted, or fit fell back)
  kFitted,    // least-squares estimate
  kClamped,   // fitted estimate was negative and clamped to 0
};

// Parameters of the analytical resource functions.
struct ResourceParams {
  double itlb_bias = 0.0;
  double dtlb_bias = 0.0;
  double otherlogic_bias = 0.0;
  // DecodeWidth -> number of reservation stations. Empty means identity.
  std::map<int, double> reserve_station_lookup;
  bool fitted = false;

  BiasSource itlb_source = BiasSource::kDefault;
  BiasSource dtlb_source = BiasSource::kDefault;
  BiasSource otherlogic_source = BiasSource::kDefault;

  bool operator==(const ResourceParams&) const = default;

  // Reservation stations for a decode width; throws InvalidArgument when an
  // explicit table lacks the entry.
  double reserve_stations(int decode_width) const;
};

// Bias-carrying components need fitted params (or params explicitly marked
// fitted=true). Throws InvalidArgument otherwise.
bool requires_bias(ComponentId component);

// F_res for one component:
//   BP -> FetchWidth               IFU -> DecodeWidth
//   ITLB -> DTLBEntry + itlb_bias  ICache -> ICacheWay * ICacheFetchBytes
//   RNU -> DecodeWidth             ROB -> RobEntry
//   ISU -> stations(DecodeWidth)   Regfile -> IntPhyRegister + FpPhyRegister
//   FUPool -> 1                    LSU -> LDQEntry + STQEntry
//   DTLB -> DTLBEntry + dtlb_bias  DCache -> DCacheWay * MemIssueWidth
//   OtherLogic -> DecodeWidth + otherlogic_bias
double eval_resource(ComponentId component, const DesignConfiguration& config,
                     const ResourceParams& params);

// Driving parameter of the three biased components.
Param bias_driver(ComponentId component);

// Which label the bias fit reads.
enum class LabelKind : std::uint8_t { kPower, kArea };

// Fits the ITLB, DTLB and OtherLogic biases: per training config, average the
// component label over its workloads, least-squares fit label = a*x + c
// against the driving parameter x, bias = max(c / a, 0). Falls back to the
// default bias (with a warning) when fewer than two distinct x values exist
// or a <= 0. The lookup table is copied from `defaults`. Throws
// InvalidArgument for an empty dataset and InvariantError when labels are
// missing.
ResourceParams fit_resource_params(const Dataset& train, const ResourceParams& defaults,
                                   LabelKind label = LabelKind::kPower);

// Model config file:
//   {"reserve_station_lookup": {"1": r1, ...},
//    "default_biases": {"itlb": b, "dtlb": b, "other_logic": b}}
// Both keys are optional. The result has fitted=false.
ResourceParams load_resource_defaults(const std::filesystem::path& path);
ResourceParams parse_resource_defaults(std::string_view json_text);

}  // namespace panda
