#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "panda/power_model.hpp"

namespace panda {

class Dataset;

// One regressor over every parameter and every event, on total power.
struct GlobalMlModel {
  BoostedEnsemble ensemble;
  bool normalize_events = true;
  bool trained = false;
  bool operator==(const GlobalMlModel&) const = default;
};

// One regressor per component on raw component power; no resource factor.
struct ComponentMlModel {
  PerComponent<BoostedEnsemble> per_component;
  PerComponent<ComponentFeatureSpec> feature_specs;
  bool trained = false;
  bool operator==(const ComponentMlModel&) const = default;
};

struct LinearFit {
  double slope = 0.0;      // W per resource unit
  double intercept = 0.0;  // W
  bool operator==(const LinearFit&) const = default;
};

// power_i = slope_i * F_res_i + intercept_i, per component, floored at 0.
struct AnalyticalLinearModel {
  ResourceParams resource_params;
  PerComponent<LinearFit> per_component{};
  bool trained = false;
  bool operator==(const AnalyticalLinearModel&) const = default;
};

GlobalMlModel train_global_ml(const Dataset& train, const TrainOptions& opts,
                              const PowerTrainSettings& settings = {});
ComponentMlModel train_component_ml(const Dataset& train, const TrainOptions& opts,
                                    const PowerTrainSettings& settings = {});
// Least squares of workload-averaged component power against F_res across
// training configs. A single distinct F_res gives a fit through the origin
// (slope = mean / F_res, intercept 0) and a warning.
AnalyticalLinearModel train_analytical(const Dataset& train, const ResourceParams& defaults);

// All predictions are floored at 0 and throw ModelError when untrained.
double predict_power(const GlobalMlModel& model, const DesignConfiguration& config,
                     const EventVector& events);
PowerPrediction predict_power(const ComponentMlModel& model, const DesignConfiguration& config,
                              const EventVector& events);
// Ignores events.
PowerPrediction predict_power(const AnalyticalLinearModel& model, const DesignConfiguration& config,
                              const EventVector& events = {});

inline constexpr std::string_view kGlobalMlFormat = "panda-global-1";
inline constexpr std::string_view kComponentMlFormat = "panda-compml-1";
inline constexpr std::string_view kAnalyticalFormat = "panda-analytical-1";

std::string serialize(const GlobalMlModel& model);
std::string serialize(const ComponentMlModel& model);
std::string serialize(const AnalyticalLinearModel& model);
GlobalMlModel deserialize_global_ml(std::string_view bytes);
ComponentMlModel deserialize_component_ml(std::string_view bytes);
AnalyticalLinearModel deserialize_analytical(std::string_view bytes);

// Uniform handle over the four total-power model kinds.
enum class ModelKind : std::uint8_t { kPanda, kGlobalMl, kComponentMl, kAnalytical };

std::string_view model_kind_name(ModelKind kind);  // "panda", "global-ml", ...
std::optional<ModelKind> parse_model_kind(std::string_view name);

using AnyPowerModel =
    std::variant<PandaPowerModel, GlobalMlModel, ComponentMlModel, AnalyticalLinearModel>;

ModelKind kind_of(const AnyPowerModel& model);

AnyPowerModel train_power_model(ModelKind kind, const Dataset& train, const TrainOptions& opts,
                                const ResourceParams& defaults,
                                const PowerTrainSettings& settings = {});

// Total power; the breakdown is absent for the global model.
struct TotalPower {
  double total = 0.0;
  std::optional<PerComponent<double>> breakdown;
};
TotalPower predict_any(const AnyPowerModel& model, const DesignConfiguration& config,
                       const EventVector& events);

std::string serialize(const AnyPowerModel& model);
// Dispatches on the format tag. Throws VersionMismatchError for an unknown tag.
AnyPowerModel deserialize_power_model(std::string_view bytes);

}  // namespace panda
