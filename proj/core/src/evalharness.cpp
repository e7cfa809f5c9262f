#include "panda/evalharness.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "panda/error.hpp"
#include "panda/parallel.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;

double mape(std::span<const double> labels, std::span<const double> preds) {
  if (labels.size() != preds.size()) throw InvalidArgument("mape: length mismatch");
  if (labels.empty()) throw InvalidArgument("mape: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0.0) throw InvalidArgument("mape: zero label at index " + std::to_string(i));
    sum += std::abs(labels[i] - preds[i]) / std::abs(labels[i]);
  }
  return sum / static_cast<double>(labels.size());
}

std::optional<double> try_pearson_r(std::span<const double> labels, std::span<const double> preds) {
  if (labels.size() != preds.size() || labels.size() < 2) return std::nullopt;
  const double n = static_cast<double>(labels.size());
  double my = 0.0, mp = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    my += labels[i];
    mp += preds[i];
  }
  my /= n;
  mp /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double dy = labels[i] - my;
    const double dp = preds[i] - mp;
    sxy += dy * dp;
    sxx += dy * dy;
    syy += dp * dp;
  }
  // Relative guard so rounding noise on constant data does not count as variance.
  const double scale_y = std::max(1.0, my * my) * n;
  const double scale_p = std::max(1.0, mp * mp) * n;
  if (sxx <= 1e-24 * scale_y || syy <= 1e-24 * scale_p) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_r(std::span<const double> labels, std::span<const double> preds) {
  if (labels.size() != preds.size()) throw InvalidArgument("pearson_r: length mismatch");
  if (labels.size() < 2) throw InvalidArgument("pearson_r: needs at least two points");
  auto r = try_pearson_r(labels, preds);
  if (!r) throw InvalidArgument("pearson_r: zero variance");
  return *r;
}

LabelFn power_label() {
  return [](const Sample& s) { return s.total_power; };
}

LabelFn area_label() {
  return [](const Sample& s) {
    if (!s.component_area) throw InvariantError("sample for config '" + s.config.id + "' has no area");
    double total = 0.0;
    for (double a : *s.component_area) total += a;
    return total;
  };
}

LabelFn cycles_label() {
  return [](const Sample& s) {
    if (!s.true_cycles) throw InvariantError("sample for config '" + s.config.id + "' has no cycles");
    return *s.true_cycles;
  };
}

LabelFn energy_label() {
  return [](const Sample& s) {
    if (!s.true_cycles) throw InvariantError("sample for config '" + s.config.id + "' has no cycles");
    return energy_joules(s.total_power, *s.true_cycles, s.events.frequency_hz);
  };
}

Trainer power_trainer(ModelKind kind, const TrainOptions& opts, const ResourceParams& defaults,
                      const PowerTrainSettings& settings) {
  return [=](const Dataset& train) -> Predictor {
    auto model = std::make_shared<AnyPowerModel>(
        train_power_model(kind, train, opts, defaults, settings));
    return [model](const Sample& s) { return predict_any(*model, s.config, s.events).total; };
  };
}

Trainer area_trainer(const TrainOptions& opts, const ResourceParams& defaults,
                     const AreaSettings& settings) {
  return [=](const Dataset& train) -> Predictor {
    auto model = std::make_shared<AreaModel>(train_area(train, opts, defaults, settings));
    return [model](const Sample& s) { return predict_area(*model, s.config).total; };
  };
}

Trainer cycles_trainer(const TrainOptions& opts) {
  return [=](const Dataset& train) -> Predictor {
    auto model = std::make_shared<PerfCalibrator>(train_perf(train, opts));
    return [model](const Sample& s) { return predict_cycles(*model, s.config, s.events); };
  };
}

Trainer energy_trainer(ModelKind power_kind, const TrainOptions& opts,
                       const ResourceParams& defaults, const PowerTrainSettings& settings) {
  return [=](const Dataset& train) -> Predictor {
    auto power = std::make_shared<AnyPowerModel>(
        train_power_model(power_kind, train, opts, defaults, settings));
    auto perf = std::make_shared<PerfCalibrator>(train_perf(train, opts));
    return [power, perf](const Sample& s) {
      return predict_energy(*power, *perf, s.config, s.events);
    };
  };
}

namespace {

EvalReport assemble(const Dataset& dataset, const SplitPlan& plan,
                    const std::vector<std::vector<std::pair<std::size_t, double>>>& fold_preds,
                    const LabelFn& label, const ProtocolOptions& options) {
  const std::size_t n = dataset.size();
  std::vector<double> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (const auto& preds : fold_preds) {
    for (const auto& [idx, p] : preds) {
      sum[idx] += p;
      count[idx] += 1;
    }
  }

  EvalReport report;
  report.model_tag = options.model_tag;
  report.folds = plan;
  std::map<std::string, std::vector<std::size_t>, std::less<>> rows_of;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] == 0) continue;
    const Sample& s = dataset.samples()[i];
    PredictionRecord rec{s.config.id, s.events.workload, label(s), sum[i] / count[i], count[i]};
    auto [it, inserted] = rows_of.try_emplace(s.config.id);
    if (inserted) order.push_back(s.config.id);
    it->second.push_back(report.predictions.size());
    report.predictions.push_back(std::move(rec));
  }
  if (report.predictions.empty()) throw InvalidArgument("evaluation plan tests no samples");

  std::vector<double> all_y, all_p;
  double mape_sum = 0.0, r_sum = 0.0;
  int r_count = 0;
  for (const auto& id : order) {
    std::vector<double> y, p;
    for (std::size_t k : rows_of[id]) {
      y.push_back(report.predictions[k].label);
      p.push_back(report.predictions[k].prediction);
    }
    all_y.insert(all_y.end(), y.begin(), y.end());
    all_p.insert(all_p.end(), p.begin(), p.end());
    ConfigMetrics m{id, mape(y, p), std::nullopt};
    if (options.report_r) {
      m.r = try_pearson_r(y, p);
      if (m.r) {
        r_sum += *m.r;
        ++r_count;
      }
    }
    mape_sum += m.mape;
    report.per_config.push_back(std::move(m));
  }
  report.aggregate_mape = mape_sum / static_cast<double>(report.per_config.size());
  if (options.report_r) {
    if (r_count > 0) report.aggregate_r = r_sum / r_count;
    report.pooled_r = try_pearson_r(all_y, all_p);
  }
  return report;
}

}  // namespace

EvalReport run_protocol(const Dataset& dataset, const SplitPlan& plan, const Trainer& trainer,
                        const LabelFn& label, const ProtocolOptions& options) {
  validate(plan, dataset.config_ids());
  if (plan.folds.empty()) throw InvalidArgument("evaluation plan has no folds");
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    if (plan.folds[f].train_ids.empty()) {
      throw InvalidArgument("fold " + std::to_string(f) + " has no training configs");
    }
  }

  std::vector<std::vector<std::pair<std::size_t, double>>> fold_preds(plan.folds.size());
  parallel_for(plan.folds.size(), options.jobs, [&](std::size_t f) {
    const Fold& fold = plan.folds[f];
    const Dataset train = dataset.subset(fold.train_ids);
    const Predictor predict = trainer(train);
    std::set<std::string, std::less<>> test(fold.test_ids.begin(), fold.test_ids.end());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const Sample& s = dataset.samples()[i];
      if (test.count(s.config.id)) fold_preds[f].emplace_back(i, predict(s));
    }
  });
  return assemble(dataset, plan, fold_preds, label, options);
}

EvalReport run_special_case(const Dataset& dataset, const Trainer& trainer, const LabelFn& label,
                            const ProtocolOptions& options) {
  Fold fold;
  for (const auto& id : dataset.config_ids()) {
    if (id == "SP1" || id == "SP2") {
      fold.test_ids.push_back(id);
    } else {
      fold.train_ids.push_back(id);
    }
  }
  for (const char* id : {"SP1", "SP2"}) {
    if (!dataset.contains_config(id)) {
      throw InvalidArgument(std::string("special-case study needs config ") + id + " in the dataset");
    }
  }
  SplitPlan plan;
  plan.folds.push_back(std::move(fold));
  ProtocolOptions opts = options;
  opts.report_r = false;
  return run_protocol(dataset, plan, trainer, label, opts);
}

ResourceDiagnostics resource_diagnostics(const Dataset& dataset, ComponentId component,
                                         const ResourceParams& defaults) {
  if (dataset.empty()) throw InvalidArgument("resource diagnostics need a non-empty dataset");
  ResourceDiagnostics out;
  out.component = component;
  out.params = requires_bias(component) ? fit_resource_params(dataset, defaults) : defaults;

  std::map<double, std::vector<std::pair<double, double>>> groups;
  for (const auto& s : dataset.samples()) {
    if (!s.component_power) {
      throw InvariantError("sample for config '" + s.config.id + "' lacks component power labels");
    }
    const double f = eval_resource(component, s.config, out.params);
    const double p = (*s.component_power)[component];
    out.scatter.push_back({s.config.id, s.events.workload, f, p, p / f});
    groups[f].emplace_back(p, p / f);
  }

  auto mean_std = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    return std::pair{m, std::sqrt(var / static_cast<double>(v.size()))};
  };

  std::vector<double> power_means, ratio_means;
  for (const auto& [f, rows] : groups) {
    std::vector<double> powers, ratios;
    for (const auto& [p, r] : rows) {
      powers.push_back(p);
      ratios.push_back(r);
    }
    DiagnosticGroup g;
    g.fres = f;
    g.count = rows.size();
    std::tie(g.power_mean, g.power_std) = mean_std(powers);
    std::tie(g.ratio_mean, g.ratio_std) = mean_std(ratios);
    power_means.push_back(g.power_mean);
    ratio_means.push_back(g.ratio_mean);
    out.groups.push_back(g);
  }
  if (out.groups.size() < 2) {
    out.note = "single resource value; spread undefined, reported as 0";
    return out;
  }
  auto spread = [&](const std::vector<double>& means) {
    auto [m, sd] = mean_std(means);
    return m > 0.0 ? sd / m : 0.0;
  };
  out.power_spread = spread(power_means);
  out.ratio_spread = spread(ratio_means);
  return out;
}

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json per = json::array();
  for (const auto& m : report.per_config) {
    per.push_back(json{{"config", m.config_id}, {"mape", m.mape}, {"r", optional_number(m.r)}});
  }
  json folds = json::array();
  for (const auto& f : report.folds.folds) {
    folds.push_back(json{{"train", f.train_ids}, {"test", f.test_ids}});
  }
  json j{{"model", report.model_tag},
         {"aggregate_mape", report.aggregate_mape},
         {"aggregate_r", optional_number(report.aggregate_r)},
         {"pooled_r", optional_number(report.pooled_r)},
         {"per_config", per},
         {"folds", folds}};
  return j.dump(2);
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "config,mape,r\n";
  for (const auto& m : report.per_config) {
    out << m.config_id << ',' << num(m.mape) << ',' << (m.r ? num(*m.r) : "") << '\n';
  }
}

void write_predictions_csv(std::ostream& out, const EvalReport& report) {
  out << "config,workload,label,prediction,folds\n";
  for (const auto& p : report.predictions) {
    out << p.config_id << ',' << p.workload << ',' << num(p.label) << ',' << num(p.prediction)
        << ',' << p.folds << '\n';
  }
}

std::string diagnostics_to_json(const ResourceDiagnostics& diag) {
  json groups = json::array();
  for (const auto& g : diag.groups) {
    groups.push_back(json{{"fres", g.fres},
                          {"count", g.count},
                          {"power_mean", g.power_mean},
                          {"power_std", g.power_std},
                          {"ratio_mean", g.ratio_mean},
                          {"ratio_std", g.ratio_std}});
  }
  json j{{"component", std::string(component_name(diag.component))},
         {"resource_params", detail::resource_params_to_json(diag.params)},
         {"groups", groups},
         {"power_spread", diag.power_spread},
         {"ratio_spread", diag.ratio_spread},
         {"note", diag.note ? json(*diag.note) : json(nullptr)}};
  return j.dump(2);
}

void write_scatter_csv(std::ostream& out, const ResourceDiagnostics& diag) {
  out << "config,workload,fres,power_w,power_per_fres\n";
  for (const auto& r : diag.scatter) {
    out << r.config_id << ',' << r.workload << ',' << num(r.fres) << ',' << num(r.power) << ','
        << num(r.ratio) << '\n';
  }
}

}  // namespace panda
