#include "panda/power_model.hpp"

#include <algorithm>

#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/parallel.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

const std::vector<Param>& component_params(ComponentId c) {
  using P = Param;
  static const std::vector<std::vector<Param>> table = {
      /* BP */ {P::kFetchWidth, P::kBranchCount},
      /* IFU */ {P::kFetchWidth, P::kDecodeWidth, P::kFetchBufferEntry, P::kICacheFetchBytes},
      /* ITLB */ {P::kDTLBEntry},
      /* ICache */ {P::kICacheWay, P::kICacheFetchBytes},
      /* RNU */ {P::kDecodeWidth},
      /* ROB */ {P::kDecodeWidth, P::kRobEntry},
      /* ISU */ {P::kDecodeWidth, P::kMemIssueWidth, P::kFpIssueWidth, P::kIntIssueWidth},
      /* Regfile */ {P::kDecodeWidth, P::kIntPhyRegister, P::kFpPhyRegister},
      /* FUPool */ {P::kMemIssueWidth, P::kFpIssueWidth, P::kIntIssueWidth},
      /* LSU */ {P::kLDQEntry, P::kSTQEntry, P::kMemIssueWidth},
      /* DTLB */ {P::kDTLBEntry},
      /* DCache */ {P::kDCacheWay, P::kDTLBEntry, P::kDCacheMSHR, P::kMemIssueWidth},
      /* OtherLogic */ {all_params().begin(), all_params().end()},
  };
  return table[index_of(c)];
}

ComponentFeatureSpec default_feature_spec(ComponentId c, bool normalize_events) {
  ComponentFeatureSpec spec;
  spec.component = c;
  spec.config_features = component_params(c);
  spec.event_features = component_events(c);
  spec.normalize_events = normalize_events;
  return spec;
}

std::string event_feature_name(std::string_view event, bool normalized) {
  std::string name(event);
  if (normalized) name += "_rate";
  return name;
}

std::vector<std::string> ComponentFeatureSpec::feature_names() const {
  std::vector<std::string> names;
  names.reserve(config_features.size() + event_features.size());
  for (Param p : config_features) names.emplace_back(param_name(p));
  for (const auto& e : event_features) names.push_back(event_feature_name(e, normalize_events));
  return names;
}

FeatureRow build_feature_row(std::span<const Param> params, std::span<const std::string> events,
                             bool normalize_events, const DesignConfiguration& config,
                             const EventVector& ev) {
  double cycles = 1.0;
  if (normalize_events && !events.empty()) {
    cycles = ev.count(kNumCycles);
    if (!(cycles > 0.0)) {
      throw InvalidArgument("workload '" + ev.workload +
                            "': numCycles must be positive to normalize events");
    }
  }
  FeatureRow row;
  row.names.reserve(params.size() + events.size());
  row.values.reserve(params.size() + events.size());
  for (Param p : params) {
    row.names.emplace_back(param_name(p));
    row.values.push_back(get_param(config, p));
  }
  for (const auto& e : events) {
    row.names.push_back(event_feature_name(e, normalize_events));
    auto it = ev.counts.find(e);
    if (it == ev.counts.end()) {
      row.imputed.push_back(e);
      row.values.push_back(0.0);
    } else {
      row.values.push_back(normalize_events ? it->second / cycles : it->second);
    }
  }
  return row;
}

FeatureRow build_features(const ComponentFeatureSpec& spec, const DesignConfiguration& config,
                          const EventVector& events) {
  return build_feature_row(spec.config_features, spec.event_features, spec.normalize_events,
                           config, events);
}

PandaPowerModel train_panda(const Dataset& train, const TrainOptions& opts,
                            const ResourceParams& defaults, const PowerTrainSettings& settings) {
  opts.validate();
  if (train.empty()) throw InvalidArgument("cannot train on an empty dataset");
  for (const auto& s : train.samples()) {
    if (!s.component_power) {
      throw InvariantError("sample for config '" + s.config.id + "' workload '" +
                           s.events.workload + "' lacks component power labels");
    }
  }

  PandaPowerModel model;
  model.train_options = opts;
  model.resource_params = fit_resource_params(train, defaults, LabelKind::kPower);
  for (ComponentId c : kAllComponents) {
    model.feature_specs[c] = default_feature_spec(c, settings.normalize_events);
  }

  parallel_for(kNumComponents, settings.jobs, [&](std::size_t i) {
    const ComponentId c = kAllComponents[i];
    const ComponentFeatureSpec& spec = model.feature_specs[c];
    FeatureTable table(spec.feature_names());
    std::vector<double> labels;
    labels.reserve(train.size());
    for (const auto& s : train.samples()) {
      const double fres = eval_resource(c, s.config, model.resource_params);
      if (!(fres > 0.0)) {
        throw InvariantError("resource function of " + std::string(component_name(c)) +
                             " is not positive for config '" + s.config.id + "'");
      }
      table.add_row(build_features(spec, s.config, s.events));
      labels.push_back((*s.component_power)[c] / fres);
    }
    model.per_component[c] = fit(table, labels, opts);
  });
  model.trained = true;
  return model;
}

double predict_component_power(const PandaPowerModel& model, ComponentId component,
                               const DesignConfiguration& config, const EventVector& events) {
  if (!model.trained) throw ModelError("PANDA power model is not trained");
  const FeatureRow row = build_features(model.feature_specs[component], config, events);
  const double ml = model.per_component[component].predict(row);
  const double fres = eval_resource(component, config, model.resource_params);
  return std::max(0.0, ml * fres);
}

PowerPrediction predict_total_power(const PandaPowerModel& model, const DesignConfiguration& config,
                                    const EventVector& events) {
  PowerPrediction out;
  for (ComponentId c : kAllComponents) {
    out.breakdown[c] = predict_component_power(model, c, config, events);
    out.total += out.breakdown[c];
  }
  return out;
}

namespace detail {

json feature_spec_to_json(const ComponentFeatureSpec& spec) {
  json params = json::array();
  for (Param p : spec.config_features) params.push_back(std::string(param_name(p)));
  return json{{"component", std::string(component_name(spec.component))},
              {"config_features", params},
              {"event_features", spec.event_features},
              {"normalize_events", spec.normalize_events}};
}

ComponentFeatureSpec feature_spec_from_json(const json& j) {
  ObjectReader r(j, "feature_spec");
  ComponentFeatureSpec spec;
  const std::string comp = r.string("component");
  auto c = parse_component(comp);
  if (!c) throw ParseError("feature_spec: unknown component '" + comp + "'");
  spec.component = *c;
  const json& params = r.required("config_features");
  const json& events = r.required("event_features");
  if (!params.is_array() || !events.is_array()) {
    throw ParseError("feature_spec: feature lists must be arrays");
  }
  for (const auto& p : params) {
    auto name = ObjectReader::as_string(p, "feature_spec.config_features");
    auto param = parse_param(name);
    if (!param) throw ParseError("feature_spec: unknown parameter '" + name + "'");
    spec.config_features.push_back(*param);
  }
  for (const auto& e : events) {
    auto name = ObjectReader::as_string(e, "feature_spec.event_features");
    if (!is_registered_event(name)) throw ParseError("feature_spec: unknown event '" + name + "'");
    spec.event_features.push_back(name);
  }
  spec.normalize_events = r.boolean("normalize_events");
  r.finish();
  return spec;
}

}  // namespace detail

std::string serialize(const PandaPowerModel& model) {
  if (!model.trained) throw ModelError("cannot serialize an untrained PANDA model");
  json components = json::object();
  for (ComponentId c : kAllComponents) {
    components[std::string(component_name(c))] =
        json{{"spec", detail::feature_spec_to_json(model.feature_specs[c])},
             {"ensemble", detail::ensemble_to_json(model.per_component[c])}};
  }
  json doc{{"format", std::string(kPandaModelFormat)},
           {"train_options", detail::options_to_json(model.train_options)},
           {"resource_params", detail::resource_params_to_json(model.resource_params)},
           {"components", components}};
  return doc.dump();
}

PandaPowerModel deserialize_panda_model(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  detail::expect_format(doc, kPandaModelFormat);
  return detail::guard_payload([&] {
    ObjectReader r(doc, "panda_model");
    r.required("format");
    PandaPowerModel model;
    model.train_options = detail::options_from_json(r.required("train_options"));
    model.resource_params = detail::resource_params_from_json(r.required("resource_params"));
    ObjectReader comps(r.required("components"), "panda_model.components");
    for (ComponentId c : kAllComponents) {
      ObjectReader entry(comps.required(component_name(c)), "panda_model.components");
      model.feature_specs[c] = detail::feature_spec_from_json(entry.required("spec"));
      model.per_component[c] = detail::ensemble_from_json(entry.required("ensemble"));
      entry.finish();
      if (model.feature_specs[c].component != c ||
          model.per_component[c].feature_names() != model.feature_specs[c].feature_names()) {
        throw ParseError(std::string("component ") + std::string(component_name(c)) +
                         ": ensemble features do not match its spec");
      }
    }
    comps.finish();
    r.finish();
    model.trained = true;
    return model;
  });
}

}  // namespace panda
