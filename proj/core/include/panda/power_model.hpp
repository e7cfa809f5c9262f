#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panda/component.hpp"
#include "panda/config.hpp"
#include "panda/events.hpp"
#include "panda/regressor.hpp"
#include "panda/resource.hpp"

namespace panda {

class Dataset;

// Features of one component's regressor: its configuration parameters
// followed by its events.
struct ComponentFeatureSpec {
  ComponentId component = ComponentId::kBP;
  std::vector<Param> config_features;
  std::vector<std::string> event_features;
  bool normalize_events = true;

  // Config parameter names, then event names ("<event>_rate" when normalized).
  std::vector<std::string> feature_names() const;
  bool operator==(const ComponentFeatureSpec&) const = default;
};

// Per-component parameter lists. OtherLogic gets every parameter.
const std::vector<Param>& component_params(ComponentId c);

ComponentFeatureSpec default_feature_spec(ComponentId c, bool normalize_events = true);

std::string event_feature_name(std::string_view event, bool normalized);

// Shared by every learned model. Config values are copied; events are divided
// by numCycles when `normalize_events`; absent counters become 0 and are
// listed in FeatureRow::imputed. Throws InvalidArgument when normalizing with
// numCycles <= 0.
FeatureRow build_feature_row(std::span<const Param> params, std::span<const std::string> events,
                             bool normalize_events, const DesignConfiguration& config,
                             const EventVector& ev);

FeatureRow build_features(const ComponentFeatureSpec& spec, const DesignConfiguration& config,
                          const EventVector& events);

struct PandaPowerModel {
  ResourceParams resource_params;
  PerComponent<BoostedEnsemble> per_component;
  PerComponent<ComponentFeatureSpec> feature_specs;
  TrainOptions train_options;
  bool trained = false;

  bool operator==(const PandaPowerModel&) const = default;
};

struct PowerTrainSettings {
  bool normalize_events = true;
  int jobs = 1;
};

// Fits the resource biases, then one regressor per component on
// component_power / F_res over every (config, workload) sample. Throws
// InvalidArgument for an empty dataset and InvariantError when component
// labels are missing.
PandaPowerModel train_panda(const Dataset& train, const TrainOptions& opts,
                            const ResourceParams& defaults, const PowerTrainSettings& settings = {});

// ensemble output * F_res, floored at 0. Throws ModelError if untrained.
double predict_component_power(const PandaPowerModel& model, ComponentId component,
                               const DesignConfiguration& config, const EventVector& events);

struct PowerPrediction {
  double total = 0.0;
  PerComponent<double> breakdown{};
};

PowerPrediction predict_total_power(const PandaPowerModel& model, const DesignConfiguration& config,
                                    const EventVector& events);

inline constexpr std::string_view kPandaModelFormat = "panda-model-1";

std::string serialize(const PandaPowerModel& model);
PandaPowerModel deserialize_panda_model(std::string_view bytes);

}  // namespace panda
