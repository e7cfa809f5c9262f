#include "panda/baselines.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/log.hpp"
#include "panda/parallel.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

namespace {

void require_component_labels(const Dataset& train) {
  for (const auto& s : train.samples()) {
    if (!s.component_power) {
      throw InvariantError("sample for config '" + s.config.id + "' workload '" +
                           s.events.workload + "' lacks component power labels");
    }
  }
}

std::span<const Param> every_param() { return all_params(); }

}  // namespace

GlobalMlModel train_global_ml(const Dataset& train, const TrainOptions& opts,
                              const PowerTrainSettings& settings) {
  opts.validate();
  if (train.empty()) throw InvalidArgument("cannot train on an empty dataset");
  const auto& events = event_registry();
  std::vector<double> labels;
  FeatureTable table;
  for (const auto& s : train.samples()) {
    FeatureRow row = build_feature_row(every_param(), events, settings.normalize_events, s.config,
                                       s.events);
    if (table.num_columns() == 0) table = FeatureTable(row.names);
    table.add_row(row);
    labels.push_back(s.total_power);
  }
  GlobalMlModel model;
  model.ensemble = fit(table, labels, opts);
  model.normalize_events = settings.normalize_events;
  model.trained = true;
  return model;
}

ComponentMlModel train_component_ml(const Dataset& train, const TrainOptions& opts,
                                    const PowerTrainSettings& settings) {
  opts.validate();
  if (train.empty()) throw InvalidArgument("cannot train on an empty dataset");
  require_component_labels(train);
  ComponentMlModel model;
  for (ComponentId c : kAllComponents) {
    model.feature_specs[c] = default_feature_spec(c, settings.normalize_events);
  }
  parallel_for(kNumComponents, settings.jobs, [&](std::size_t i) {
    const ComponentId c = kAllComponents[i];
    const auto& spec = model.feature_specs[c];
    FeatureTable table(spec.feature_names());
    std::vector<double> labels;
    for (const auto& s : train.samples()) {
      table.add_row(build_features(spec, s.config, s.events));
      labels.push_back((*s.component_power)[c]);
    }
    model.per_component[c] = fit(table, labels, opts);
  });
  model.trained = true;
  return model;
}

AnalyticalLinearModel train_analytical(const Dataset& train, const ResourceParams& defaults) {
  if (train.empty()) throw InvalidArgument("cannot train on an empty dataset");
  require_component_labels(train);
  AnalyticalLinearModel model;
  model.resource_params = fit_resource_params(train, defaults, LabelKind::kPower);

  // Workload-averaged power per config, in first-appearance order.
  std::vector<std::string> ids = train.config_ids();
  std::map<std::string, std::pair<PerComponent<double>, int>, std::less<>> sums;
  for (const auto& s : train.samples()) {
    auto& [acc, count] = sums[s.config.id];
    for (ComponentId c : kAllComponents) acc[c] += (*s.component_power)[c];
    count += 1;
  }
  const auto configs = train.configurations();

  for (ComponentId c : kAllComponents) {
    std::vector<std::pair<double, double>> points;
    std::set<double> distinct;
    for (const auto& cfg : configs) {
      const auto& [acc, count] = sums.find(cfg.id)->second;
      const double x = eval_resource(c, cfg, model.resource_params);
      points.emplace_back(x, acc[c] / count);
      distinct.insert(x);
    }
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
      mean_x += x;
      mean_y += y;
    }
    mean_x /= static_cast<double>(points.size());
    mean_y /= static_cast<double>(points.size());
    LinearFit lf;
    if (distinct.size() < 2) {
      // One point: fit through the origin so the prediction still scales with F_res.
      warn("analytical model: " + std::string(component_name(c)) +
           " has a single resource value in training data; fitting power proportional to it");
      const double x = points.front().first;
      if (x > 0.0) {
        lf.slope = mean_y / x;
      } else {
        lf.intercept = mean_y;
      }
    } else {
      double sxy = 0.0, sxx = 0.0;
      for (const auto& [x, y] : points) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
      }
      lf.slope = sxy / sxx;
      lf.intercept = mean_y - lf.slope * mean_x;
    }
    model.per_component[c] = lf;
  }
  model.trained = true;
  return model;
}

double predict_power(const GlobalMlModel& model, const DesignConfiguration& config,
                     const EventVector& events) {
  if (!model.trained) throw ModelError("global ML model is not trained");
  FeatureRow row =
      build_feature_row(every_param(), event_registry(), model.normalize_events, config, events);
  return std::max(0.0, model.ensemble.predict(row));
}

PowerPrediction predict_power(const ComponentMlModel& model, const DesignConfiguration& config,
                              const EventVector& events) {
  if (!model.trained) throw ModelError("component ML model is not trained");
  PowerPrediction out;
  for (ComponentId c : kAllComponents) {
    const double p =
        model.per_component[c].predict(build_features(model.feature_specs[c], config, events));
    out.breakdown[c] = std::max(0.0, p);
    out.total += out.breakdown[c];
  }
  return out;
}

PowerPrediction predict_power(const AnalyticalLinearModel& model, const DesignConfiguration& config,
                              const EventVector&) {
  if (!model.trained) throw ModelError("analytical model is not trained");
  PowerPrediction out;
  for (ComponentId c : kAllComponents) {
    const LinearFit& lf = model.per_component[c];
    const double p = lf.slope * eval_resource(c, config, model.resource_params) + lf.intercept;
    out.breakdown[c] = std::max(0.0, p);
    out.total += out.breakdown[c];
  }
  return out;
}

std::string serialize(const GlobalMlModel& model) {
  if (!model.trained) throw ModelError("cannot serialize an untrained global ML model");
  json doc{{"format", std::string(kGlobalMlFormat)},
           {"normalize_events", model.normalize_events},
           {"ensemble", detail::ensemble_to_json(model.ensemble)}};
  return doc.dump();
}

std::string serialize(const ComponentMlModel& model) {
  if (!model.trained) throw ModelError("cannot serialize an untrained component ML model");
  json components = json::object();
  for (ComponentId c : kAllComponents) {
    components[std::string(component_name(c))] =
        json{{"spec", detail::feature_spec_to_json(model.feature_specs[c])},
             {"ensemble", detail::ensemble_to_json(model.per_component[c])}};
  }
  return json{{"format", std::string(kComponentMlFormat)}, {"components", components}}.dump();
}

std::string serialize(const AnalyticalLinearModel& model) {
  if (!model.trained) throw ModelError("cannot serialize an untrained analytical model");
  json fits = detail::per_component_to_json(model.per_component, [](const LinearFit& lf) {
    return json{{"slope", lf.slope}, {"intercept", lf.intercept}};
  });
  return json{{"format", std::string(kAnalyticalFormat)},
              {"resource_params", detail::resource_params_to_json(model.resource_params)},
              {"components", fits}}
      .dump();
}

GlobalMlModel deserialize_global_ml(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  detail::expect_format(doc, kGlobalMlFormat);
  return detail::guard_payload([&] {
    ObjectReader r(doc, "global_ml");
    r.required("format");
    GlobalMlModel model;
    model.normalize_events = r.boolean("normalize_events");
    model.ensemble = detail::ensemble_from_json(r.required("ensemble"));
    r.finish();
    model.trained = true;
    return model;
  });
}

ComponentMlModel deserialize_component_ml(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  detail::expect_format(doc, kComponentMlFormat);
  return detail::guard_payload([&] {
    ObjectReader r(doc, "component_ml");
    r.required("format");
    ComponentMlModel model;
    ObjectReader comps(r.required("components"), "component_ml.components");
    for (ComponentId c : kAllComponents) {
      ObjectReader entry(comps.required(component_name(c)), "component_ml.components");
      model.feature_specs[c] = detail::feature_spec_from_json(entry.required("spec"));
      model.per_component[c] = detail::ensemble_from_json(entry.required("ensemble"));
      entry.finish();
      if (model.per_component[c].feature_names() != model.feature_specs[c].feature_names()) {
        throw ParseError(std::string(component_name(c)) + ": ensemble features do not match spec");
      }
    }
    comps.finish();
    r.finish();
    model.trained = true;
    return model;
  });
}

AnalyticalLinearModel deserialize_analytical(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  detail::expect_format(doc, kAnalyticalFormat);
  return detail::guard_payload([&] {
    ObjectReader r(doc, "analytical");
    r.required("format");
    AnalyticalLinearModel model;
    model.resource_params = detail::resource_params_from_json(r.required("resource_params"));
    model.per_component = detail::per_component_from_json<LinearFit>(
        r.required("components"), "analytical.components", [](const json& j) {
          ObjectReader f(j, "analytical.components");
          LinearFit lf;
          lf.slope = f.number("slope");
          lf.intercept = f.number("intercept");
          f.finish();
          return lf;
        });
    r.finish();
    model.trained = true;
    return model;
  });
}

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPanda:
      return "panda";
    case ModelKind::kGlobalMl:
      return "global-ml";
    case ModelKind::kComponentMl:
      return "component-ml";
    case ModelKind::kAnalytical:
      return "analytical";
  }
  return "panda";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::kPanda, ModelKind::kGlobalMl, ModelKind::kComponentMl,
                      ModelKind::kAnalytical}) {
    if (model_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

ModelKind kind_of(const AnyPowerModel& model) { return static_cast<ModelKind>(model.index()); }

AnyPowerModel train_power_model(ModelKind kind, const Dataset& train, const TrainOptions& opts,
                                const ResourceParams& defaults,
                                const PowerTrainSettings& settings) {
  switch (kind) {
    case ModelKind::kPanda:
      return train_panda(train, opts, defaults, settings);
    case ModelKind::kGlobalMl:
      return train_global_ml(train, opts, settings);
    case ModelKind::kComponentMl:
      return train_component_ml(train, opts, settings);
    case ModelKind::kAnalytical:
      return train_analytical(train, defaults);
  }
  throw InvalidArgument("unknown model kind");
}

TotalPower predict_any(const AnyPowerModel& model, const DesignConfiguration& config,
                       const EventVector& events) {
  return std::visit(
      [&](const auto& m) -> TotalPower {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GlobalMlModel>) {
          return {predict_power(m, config, events), std::nullopt};
        } else if constexpr (std::is_same_v<T, PandaPowerModel>) {
          auto p = predict_total_power(m, config, events);
          return {p.total, p.breakdown};
        } else {
          auto p = predict_power(m, config, events);
          return {p.total, p.breakdown};
        }
      },
      model);
}

std::string serialize(const AnyPowerModel& model) {
  return std::visit([](const auto& m) { return serialize(m); }, model);
}

AnyPowerModel deserialize_power_model(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string()) {
    throw CorruptPayloadError("corrupt model payload: missing format tag");
  }
  const auto tag = doc["format"].get<std::string>();
  if (tag == kPandaModelFormat) return deserialize_panda_model(bytes);
  if (tag == kGlobalMlFormat) return deserialize_global_ml(bytes);
  if (tag == kComponentMlFormat) return deserialize_component_ml(bytes);
  if (tag == kAnalyticalFormat) return deserialize_analytical(bytes);
  throw VersionMismatchError("unsupported power model format '" + tag + "'");
}

}  // namespace panda
