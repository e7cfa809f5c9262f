#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "panda/baselines.hpp"
#include "panda/dataset.hpp"
#include "panda/quality.hpp"

namespace panda {

// (1/n) * sum |y - p| / y. Throws InvalidArgument on a length mismatch, empty
// input or a zero label.
double mape(std::span<const double> labels, std::span<const double> preds);

// Pearson correlation. Throws InvalidArgument for fewer than two points or
// zero variance on either side.
double pearson_r(std::span<const double> labels, std::span<const double> preds);

// Same, but nullopt instead of throwing on degenerate input.
std::optional<double> try_pearson_r(std::span<const double> labels, std::span<const double> preds);

using Predictor = std::function<double(const Sample&)>;
using Trainer = std::function<Predictor(const Dataset& train)>;
using LabelFn = std::function<double(const Sample&)>;

LabelFn power_label();
LabelFn area_label();    // sum of component areas
LabelFn cycles_label();  // true cycles
LabelFn energy_label();  // total power * true cycles / frequency

Trainer power_trainer(ModelKind kind, const TrainOptions& opts, const ResourceParams& defaults = {},
                      const PowerTrainSettings& settings = {});
Trainer area_trainer(const TrainOptions& opts, const ResourceParams& defaults = {},
                     const AreaSettings& settings = {});
Trainer cycles_trainer(const TrainOptions& opts);
Trainer energy_trainer(ModelKind power_kind, const TrainOptions& opts,
                       const ResourceParams& defaults = {}, const PowerTrainSettings& settings = {});

struct PredictionRecord {
  std::string config_id;
  std::string workload;
  double label = 0.0;
  double prediction = 0.0;  // mean over the folds that tested this row
  int folds = 0;
};

struct ConfigMetrics {
  std::string config_id;
  double mape = 0.0;
  std::optional<double> r;  // over workloads; absent when degenerate
};

struct EvalReport {
  std::string model_tag;
  SplitPlan folds;
  std::vector<ConfigMetrics> per_config;  // dataset order
  double aggregate_mape = 0.0;            // mean of per-config MAPE
  std::optional<double> aggregate_r;      // mean of the defined per-config R
  std::optional<double> pooled_r;         // over every prediction record
  std::vector<PredictionRecord> predictions;
};

struct ProtocolOptions {
  std::string model_tag;
  int jobs = 1;
  bool report_r = true;
};

// Trains one model per fold, predicts every test row, averages predictions of
// rows tested by several folds, then computes per-config metrics over
// workloads. Throws InvalidArgument when a fold references an unknown config
// or trains on nothing.
EvalReport run_protocol(const Dataset& dataset, const SplitPlan& plan, const Trainer& trainer,
                        const LabelFn& label, const ProtocolOptions& options = {});

// Trains on every config except SP1 and SP2, tests those two; no R. Throws
// InvalidArgument when either special is missing.
EvalReport run_special_case(const Dataset& dataset, const Trainer& trainer, const LabelFn& label,
                            const ProtocolOptions& options = {});

struct DiagnosticGroup {
  double fres = 0.0;
  std::size_t count = 0;
  double power_mean = 0.0;
  double power_std = 0.0;
  double ratio_mean = 0.0;  // power / F_res
  double ratio_std = 0.0;
};

struct ScatterRow {
  std::string config_id;
  std::string workload;
  double fres = 0.0;
  double power = 0.0;
  double ratio = 0.0;
};

struct ResourceDiagnostics {
  ComponentId component = ComponentId::kBP;
  ResourceParams params;
  std::vector<DiagnosticGroup> groups;  // ascending F_res
  // Population std of the group means divided by their mean.
  double power_spread = 0.0;
  double ratio_spread = 0.0;
  std::optional<std::string> note;
  std::vector<ScatterRow> scatter;  // one per sample
};

// Biased components get biases fitted on `dataset` first. Throws
// InvariantError when component power labels are missing.
ResourceDiagnostics resource_diagnostics(const Dataset& dataset, ComponentId component,
                                         const ResourceParams& defaults = {});

std::string report_to_json(const EvalReport& report);
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_predictions_csv(std::ostream& out, const EvalReport& report);
std::string diagnostics_to_json(const ResourceDiagnostics& diag);
void write_scatter_csv(std::ostream& out, const ResourceDiagnostics& diag);

}  // namespace panda
