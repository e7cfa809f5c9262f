#include "panda/quality.hpp"

#include <algorithm>
#include <map>

#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/parallel.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

namespace {

FeatureRow area_features(ComponentId c, const DesignConfiguration& config) {
  static const EventVector kNoEvents;
  return build_feature_row(component_params(c), {}, false, config, kNoEvents);
}

}  // namespace

AreaModel train_area(const Dataset& train, const TrainOptions& opts,
                     const ResourceParams& defaults, const AreaSettings& settings) {
  opts.validate();
  if (train.empty()) throw InvalidArgument("cannot train on an empty dataset");

  std::vector<Sample> rows;
  std::map<std::string, std::size_t, std::less<>> seen;
  for (const auto& s : train.samples()) {
    if (!s.component_area) {
      throw InvariantError("sample for config '" + s.config.id + "' lacks component area labels");
    }
    auto [it, inserted] = seen.emplace(s.config.id, rows.size());
    if (inserted) {
      rows.push_back(s);
    } else if (*rows[it->second].component_area != *s.component_area) {
      throw InvariantError("config '" + s.config.id + "' has workload-dependent area labels");
    }
  }
  const Dataset unique(rows);

  AreaModel model;
  model.use_resource_factor = settings.use_resource_factor;
  if (settings.use_resource_factor) {
    model.resource_params = fit_resource_params(unique, defaults, LabelKind::kArea);
  }
  parallel_for(kNumComponents, settings.jobs, [&](std::size_t i) {
    const ComponentId c = kAllComponents[i];
    FeatureTable table;
    std::vector<double> labels;
    for (const auto& s : rows) {
      FeatureRow row = area_features(c, s.config);
      if (table.num_columns() == 0) table = FeatureTable(row.names);
      table.add_row(row);
      double label = (*s.component_area)[c];
      if (settings.use_resource_factor) label /= eval_resource(c, s.config, model.resource_params);
      labels.push_back(label);
    }
    model.per_component[c] = fit(table, labels, opts);
  });
  model.trained = true;
  return model;
}

AreaPrediction predict_area(const AreaModel& model, const DesignConfiguration& config) {
  if (!model.trained) throw ModelError("area model is not trained");
  AreaPrediction out;
  for (ComponentId c : kAllComponents) {
    double a = model.per_component[c].predict(area_features(c, config));
    if (model.use_resource_factor) a *= eval_resource(c, config, model.resource_params);
    out.breakdown[c] = std::max(0.0, a);
    out.total += out.breakdown[c];
  }
  return out;
}

FeatureRow build_perf_features(const DesignConfiguration& config, const EventVector& events) {
  return build_feature_row(all_params(), perf_events(), true, config, events);
}

PerfCalibrator train_perf(const Dataset& train, const TrainOptions& opts) {
  opts.validate();
  if (train.empty()) throw InvalidArgument("cannot train on an empty dataset");
  FeatureTable table;
  std::vector<double> labels;
  for (const auto& s : train.samples()) {
    if (!s.true_cycles) {
      throw InvariantError("sample for config '" + s.config.id + "' workload '" +
                           s.events.workload + "' lacks true cycle labels");
    }
    if (!(s.events.baseline_cycles > 0.0)) {
      throw InvariantError("sample for config '" + s.config.id + "' workload '" +
                           s.events.workload + "' has zero baseline cycles");
    }
    FeatureRow row = build_perf_features(s.config, s.events);
    if (table.num_columns() == 0) table = FeatureTable(row.names);
    table.add_row(row);
    labels.push_back(*s.true_cycles / s.events.baseline_cycles);
  }
  PerfCalibrator model;
  model.ensemble = fit(table, labels, opts);
  model.trained = true;
  return model;
}

double predict_cycles(const PerfCalibrator& model, const DesignConfiguration& config,
                      const EventVector& events) {
  if (!model.trained) throw ModelError("performance calibrator is not trained");
  const double ratio = model.ensemble.predict(build_perf_features(config, events));
  return std::max(1.0, ratio * events.baseline_cycles);
}

double energy_joules(double power_w, double cycles, double frequency_hz) {
  if (!(frequency_hz > 0.0)) throw InvalidArgument("frequency must be positive");
  return power_w * cycles / frequency_hz;
}

double predict_energy(const AnyPowerModel& power, const PerfCalibrator& perf,
                      const DesignConfiguration& config, const EventVector& events) {
  const double watts = predict_any(power, config, events).total;
  const double cycles = predict_cycles(perf, config, events);
  return energy_joules(watts, cycles, events.frequency_hz);
}

std::string serialize(const AreaModel& model) {
  if (!model.trained) throw ModelError("cannot serialize an untrained area model");
  json doc{{"format", std::string(kAreaFormat)},
           {"use_resource_factor", model.use_resource_factor},
           {"resource_params", detail::resource_params_to_json(model.resource_params)},
           {"components", detail::per_component_to_json(model.per_component, [](const auto& e) {
              return detail::ensemble_to_json(e);
            })}};
  return doc.dump();
}

std::string serialize(const PerfCalibrator& model) {
  if (!model.trained) throw ModelError("cannot serialize an untrained performance calibrator");
  return json{{"format", std::string(kPerfFormat)},
              {"ensemble", detail::ensemble_to_json(model.ensemble)}}
      .dump();
}

AreaModel deserialize_area(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  detail::expect_format(doc, kAreaFormat);
  return detail::guard_payload([&] {
    ObjectReader r(doc, "area");
    r.required("format");
    AreaModel model;
    model.use_resource_factor = r.boolean("use_resource_factor");
    model.resource_params = detail::resource_params_from_json(r.required("resource_params"));
    model.per_component = detail::per_component_from_json<BoostedEnsemble>(
        r.required("components"), "area.components",
        [](const json& j) { return detail::ensemble_from_json(j); });
    r.finish();
    model.trained = true;
    return model;
  });
}

PerfCalibrator deserialize_perf(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  detail::expect_format(doc, kPerfFormat);
  return detail::guard_payload([&] {
    ObjectReader r(doc, "perf");
    r.required("format");
    PerfCalibrator model;
    model.ensemble = detail::ensemble_from_json(r.required("ensemble"));
    r.finish();
    model.trained = true;
    return model;
  });
}

}  // namespace panda
