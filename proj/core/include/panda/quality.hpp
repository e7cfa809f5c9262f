#pragma once

#include <string>
#include <string_view>

#include "panda/baselines.hpp"
#include "panda/power_model.hpp"

namespace panda {

class Dataset;

// Per-component area regressors over configuration parameters only.
struct AreaModel {
  PerComponent<BoostedEnsemble> per_component;
  bool use_resource_factor = false;
  ResourceParams resource_params;  // area-fitted; used only with the resource factor
  bool trained = false;
  bool operator==(const AreaModel&) const = default;
};

struct AreaSettings {
  bool use_resource_factor = false;
  int jobs = 1;
};

// One training row per config id. Throws InvariantError when area labels are
// missing or differ between workloads of the same config.
AreaModel train_area(const Dataset& train, const TrainOptions& opts,
                     const ResourceParams& defaults = {}, const AreaSettings& settings = {});

struct AreaPrediction {
  double total = 0.0;  // um^2
  PerComponent<double> breakdown{};
};

// Floored at 0 per component.
AreaPrediction predict_area(const AreaModel& model, const DesignConfiguration& config);

// Learns true_cycles / baseline_cycles from every parameter plus the perf
// events (as rates).
struct PerfCalibrator {
  BoostedEnsemble ensemble;
  bool trained = false;
  bool operator==(const PerfCalibrator&) const = default;
};

// Throws InvariantError when true cycles are missing or baseline cycles are 0.
PerfCalibrator train_perf(const Dataset& train, const TrainOptions& opts);

FeatureRow build_perf_features(const DesignConfiguration& config, const EventVector& events);

// ratio * baseline_cycles, floored at 1.
double predict_cycles(const PerfCalibrator& model, const DesignConfiguration& config,
                      const EventVector& events);

// power * cycles / frequency.
double energy_joules(double power_w, double cycles, double frequency_hz);

double predict_energy(const AnyPowerModel& power, const PerfCalibrator& perf,
                      const DesignConfiguration& config, const EventVector& events);

inline constexpr std::string_view kAreaFormat = "panda-area-1";
inline constexpr std::string_view kPerfFormat = "panda-perf-1";

std::string serialize(const AreaModel& model);
std::string serialize(const PerfCalibrator& model);
AreaModel deserialize_area(std::string_view bytes);
PerfCalibrator deserialize_perf(std::string_view bytes);

}  // namespace panda
