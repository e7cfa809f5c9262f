#pragma once

// JSON converters shared between modules. Not installed.

#include "json_util.hpp"
#include "panda/config.hpp"
#include "panda/power_model.hpp"
#include "panda/regressor.hpp"
#include "panda/resource.hpp"

namespace panda::detail {

json config_to_json(const DesignConfiguration& config);
DesignConfiguration config_from_json(const json& j, const std::string& context);

json tech_to_json(const TechnologyNode& node);
TechnologyNode tech_from_json(const json& j, const std::string& context);

json options_to_json(const TrainOptions& opts);
TrainOptions options_from_json(const json& j);

json ensemble_to_json(const BoostedEnsemble& model);
BoostedEnsemble ensemble_from_json(const json& j);

json resource_params_to_json(const ResourceParams& params);
ResourceParams resource_params_from_json(const json& j);

json feature_spec_to_json(const ComponentFeatureSpec& spec);
ComponentFeatureSpec feature_spec_from_json(const json& j);

template <typename T, typename Fn>
json per_component_to_json(const PerComponent<T>& values, Fn&& convert) {
  json out = json::object();
  for (ComponentId c : kAllComponents) out[std::string(component_name(c))] = convert(values[c]);
  return out;
}

template <typename T, typename Fn>
PerComponent<T> per_component_from_json(const json& j, const std::string& context, Fn&& convert) {
  ObjectReader reader(j, context);
  PerComponent<T> out{};
  for (ComponentId c : kAllComponents) out[c] = convert(reader.required(component_name(c)));
  reader.finish();
  return out;
}

}  // namespace panda::detail
