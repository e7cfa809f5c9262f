#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "panda/baselines.hpp"
#include "panda/dataset.hpp"
#include "panda/dse.hpp"
#include "panda/error.hpp"
#include "panda/evalharness.hpp"
#include "panda/power_model.hpp"
#include "panda/quality.hpp"
#include "panda/synth.hpp"
#include "panda/transfer.hpp"

namespace panda::cli {
namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  out << bytes;
  if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  return out;
}

void require_input(const std::string& path, const char* flag) {
  if (path.empty()) throw InvalidArgument(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) {
    throw InvalidArgument(std::string(flag) + ": no such file '" + path + "'");
  }
}

void require_output(const std::string& path, const char* flag) {
  if (path.empty()) throw InvalidArgument(std::string(flag) + " is required");
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw InvalidArgument(std::string(flag) + ": directory '" + parent.string() + "' does not exist");
  }
}

// "name:feature_nm:voltage", e.g. tsmc28:28:0.8
TechnologyNode parse_node(const std::string& text) {
  auto a = text.find(':');
  auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) {
    throw InvalidArgument("technology node '" + text + "' must look like name:nm:volts");
  }
  TechnologyNode n;
  n.name = text.substr(0, a);
  try {
    n.feature_size_nm = std::stod(text.substr(a + 1, b - a - 1));
    n.voltage_v = std::stod(text.substr(b + 1));
  } catch (const std::exception&) {
    throw InvalidArgument("technology node '" + text + "' has a malformed number");
  }
  try {
    validate(n);
  } catch (const Error& e) {
    throw InvalidArgument(e.what());
  }
  return n;
}

struct Common {
  std::optional<std::uint64_t> seed;
  int jobs = 1;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("PANDA_SEED")) {
      std::uint64_t v = 0;
      const char* end = env + std::char_traits<char>::length(env);
      auto [ptr, ec] = std::from_chars(env, end, v);
      if (ec != std::errc() || ptr != end) {
        throw InvalidArgument(std::string("PANDA_SEED is not an unsigned integer: '") + env + "'");
      }
      return v;
    }
    return 7;
  }
};

struct TrainFlags {
  int trees = TrainOptions{}.n_trees;
  int depth = TrainOptions{}.max_depth;
  double lr = TrainOptions{}.learning_rate;
  double l2 = TrainOptions{}.l2_leaf_reg;
  int min_leaf = TrainOptions{}.min_samples_leaf;
  bool raw_events = false;
  std::string model_config;
  bool area_resource_factor = false;

  void add(CLI::App* app) {
    app->add_option("--trees", trees, "Number of boosted trees");
    app->add_option("--depth", depth, "Maximum tree depth");
    app->add_option("--lr", lr, "Learning rate");
    app->add_option("--l2", l2, "L2 leaf regularizer");
    app->add_option("--min-leaf", min_leaf, "Minimum samples per leaf");
    app->add_flag("--raw-events", raw_events, "Use raw event counts instead of per-cycle rates");
    app->add_option("--model-config", model_config,
                    "Resource defaults (reserve-station lookup, default biases)");
    app->add_flag("--area-resource-factor", area_resource_factor,
                  "Area model multiplies by the resource function");
  }

  TrainOptions options() const {
    TrainOptions o;
    o.n_trees = trees;
    o.max_depth = depth;
    o.learning_rate = lr;
    o.l2_leaf_reg = l2;
    o.min_samples_leaf = min_leaf;
    o.validate();
    return o;
  }

  ResourceParams defaults() const {
    if (model_config.empty()) return {};
    require_input(model_config, "--model-config");
    return load_resource_defaults(model_config);
  }
};

// Loaded model of any kind.
struct LoadedModel {
  std::string format;
  std::optional<AnyPowerModel> power;
  std::optional<AreaModel> area;
  std::optional<PerfCalibrator> perf;
  std::optional<TransferModel> transfer;
};

LoadedModel load_model(const std::string& path) {
  const std::string bytes = read_file(path);
  LoadedModel m;
  m.format = peek_model_format(bytes);
  if (m.format == kAreaFormat) {
    m.area = deserialize_area(bytes);
  } else if (m.format == kPerfFormat) {
    m.perf = deserialize_perf(bytes);
  } else if (m.format == kTransferFormat) {
    m.transfer = deserialize_transfer(bytes);
  } else {
    m.power = deserialize_power_model(bytes);
  }
  return m;
}

const char* const kPowerKinds[] = {"panda", "global-ml", "component-ml", "analytical"};

int cmd_synth(const Common& common, const std::string& out_path, const std::string& spec_path,
              std::optional<double> noise, bool include_special, bool affine, bool multitech,
              int designs, std::ostream& out) {
  require_output(out_path, "--out");
  const std::uint64_t seed = common.resolved_seed();
  if (multitech) {
    MultiTechSpec spec;
    spec.seed = seed;
    spec.designs = designs;
    if (noise) spec.noise_rel = *noise;
    const auto samples = generate_multitech(spec, default_nodes());
    save_transfer_samples(out_path, samples);
    out << "wrote " << samples.size() << " transfer samples to " << out_path << '\n';
    return kExitOk;
  }
  SynthSpec spec;
  if (!spec_path.empty()) {
    require_input(spec_path, "--spec");
    spec = parse_synth_spec(read_file(spec_path));
    if (common.seed || std::getenv("PANDA_SEED")) spec.seed = seed;
  } else {
    spec = default_synth_spec(seed, include_special);
  }
  if (affine) make_affine(spec);
  if (noise) spec.noise_rel = *noise;
  const Dataset ds = generate(spec);
  save_dataset(out_path, ds);
  out << "wrote " << ds.size() << " samples to " << out_path << '\n';
  return kExitOk;
}

int cmd_train(const Common& common, const std::string& kind, const std::string& data,
              const std::string& out_path, const TrainFlags& flags, std::ostream& out) {
  require_input(data, "--data");
  require_output(out_path, "--out");
  const TrainOptions opts = flags.options();
  const ResourceParams defaults = flags.defaults();
  PowerTrainSettings settings{!flags.raw_events, common.jobs};
  std::string bytes;
  if (kind == "transfer") {
    bytes = serialize(train_transfer(load_transfer_samples(data), opts));
  } else {
    const Dataset ds = load_dataset(data);
    if (kind == "area") {
      bytes = serialize(train_area(ds, opts, defaults, {flags.area_resource_factor, common.jobs}));
    } else if (kind == "perf") {
      bytes = serialize(train_perf(ds, opts));
    } else {
      auto k = parse_model_kind(kind);
      if (!k) throw InvalidArgument("unknown model kind '" + kind + "'");
      bytes = serialize(train_power_model(*k, ds, opts, defaults, settings));
    }
  }
  write_file(out_path, bytes);
  out << "wrote " << kind << " model to " << out_path << '\n';
  return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& perf_path,
                const std::string& data, const std::string& out_path, std::ostream& out) {
  require_input(model_path, "--model");
  require_input(data, "--data");
  require_output(out_path, "--out");
  if (!perf_path.empty()) require_input(perf_path, "--perf-model");
  const LoadedModel model = load_model(model_path);
  std::optional<PerfCalibrator> perf;
  if (!perf_path.empty()) {
    LoadedModel p = load_model(perf_path);
    if (!p.perf) throw InvalidArgument("--perf-model must be a performance model");
    if (!model.power) throw InvalidArgument("--perf-model needs a power model in --model");
    perf = std::move(p.perf);
  }
  if (model.transfer) throw InvalidArgument("use the 'transfer' subcommand for transfer models");
  const Dataset ds = load_dataset(data);
  std::ofstream csv = open_out(out_path);

  csv << "config,workload";
  if (model.power) {
    csv << ",predicted_power_w";
    if (kind_of(*model.power) != ModelKind::kGlobalMl) {
      for (ComponentId c : kAllComponents) csv << ',' << component_name(c) << "_w";
    }
    if (perf) csv << ",predicted_cycles,predicted_energy_j";
  } else if (model.area) {
    csv << ",predicted_area_um2";
    for (ComponentId c : kAllComponents) csv << ',' << component_name(c) << "_um2";
  } else {
    csv << ",predicted_cycles";
  }
  csv << '\n';

  for (const auto& s : ds.samples()) {
    csv << s.config.id << ',' << s.events.workload;
    if (model.power) {
      const TotalPower p = predict_any(*model.power, s.config, s.events);
      csv << ',' << num(p.total);
      if (p.breakdown) {
        for (double v : *p.breakdown) csv << ',' << num(v);
      }
      if (perf) {
        const double cycles = predict_cycles(*perf, s.config, s.events);
        csv << ',' << num(cycles) << ',' << num(energy_joules(p.total, cycles, s.events.frequency_hz));
      }
    } else if (model.area) {
      const AreaPrediction a = predict_area(*model.area, s.config);
      csv << ',' << num(a.total);
      for (double v : a.breakdown) csv << ',' << num(v);
    } else {
      csv << ',' << num(predict_cycles(*model.perf, s.config, s.events));
    }
    csv << '\n';
  }
  out << "wrote " << ds.size() << " predictions to " << out_path << '\n';
  return kExitOk;
}

int cmd_eval(const Common& common, const std::string& protocol, const std::string& kind,
             const std::string& data, int n, const std::string& json_out,
             const std::string& csv_out, const std::string& pred_out, const TrainFlags& flags,
             std::ostream& out) {
  require_input(data, "--data");
  for (const auto* p : {&json_out, &csv_out, &pred_out}) {
    if (!p->empty()) require_output(*p, "output path");
  }
  const TrainOptions opts = flags.options();
  const ResourceParams defaults = flags.defaults();
  const PowerTrainSettings settings{!flags.raw_events, 1};
  const Dataset ds = load_dataset(data);

  Trainer trainer;
  LabelFn label;
  if (kind == "area") {
    trainer = area_trainer(opts, defaults, {flags.area_resource_factor, 1});
    label = area_label();
  } else if (kind == "perf") {
    trainer = cycles_trainer(opts);
    label = cycles_label();
  } else if (kind == "energy") {
    trainer = energy_trainer(ModelKind::kPanda, opts, defaults, settings);
    label = energy_label();
  } else {
    auto k = parse_model_kind(kind);
    if (!k) throw InvalidArgument("unknown model kind '" + kind + "'");
    trainer = power_trainer(*k, opts, defaults, settings);
    label = power_label();
  }

  ProtocolOptions popts{kind, common.jobs, true};
  EvalReport report;
  if (protocol == "known-n") {
    std::vector<std::string> ids;
    for (const auto& id : ds.config_ids()) {
      if (id != "SP1" && id != "SP2") ids.push_back(id);
    }
    if (n < 1) throw InvalidArgument("--n is required for the known-n protocol");
    report = run_protocol(ds.subset(ids), split_known_n(ids, n), trainer, label, popts);
  } else if (protocol == "unknown-domain") {
    std::vector<DesignConfiguration> configs;
    std::vector<std::string> ids;
    for (const auto& c : ds.configurations()) {
      if (c.id == "SP1" || c.id == "SP2") continue;
      configs.push_back(c);
      ids.push_back(c.id);
    }
    report = run_protocol(ds.subset(ids), split_unknown_domain(configs), trainer, label, popts);
  } else if (protocol == "special") {
    report = run_special_case(ds, trainer, label, popts);
  } else {
    throw InvalidArgument("unknown protocol '" + protocol + "'");
  }

  if (!json_out.empty()) write_file(json_out, report_to_json(report) + "\n");
  if (!csv_out.empty()) {
    auto f = open_out(csv_out);
    write_report_csv(f, report);
  }
  if (!pred_out.empty()) {
    auto f = open_out(pred_out);
    write_predictions_csv(f, report);
  }
  out << "model=" << kind << " protocol=" << protocol << " folds=" << report.folds.folds.size()
      << " mape=" << num(report.aggregate_mape);
  if (report.aggregate_r) out << " r=" << num(*report.aggregate_r);
  out << '\n';
  return kExitOk;
}

int cmd_diag(const std::string& data, const std::string& component, const std::string& out_dir,
             const TrainFlags& flags, std::ostream& out) {
  require_input(data, "--data");
  if (out_dir.empty()) throw InvalidArgument("--out-dir is required");
  if (!fs::is_directory(out_dir)) {
    throw InvalidArgument("--out-dir: directory '" + out_dir + "' does not exist");
  }
  std::vector<ComponentId> comps;
  if (component == "all") {
    comps.assign(kAllComponents.begin(), kAllComponents.end());
  } else {
    auto c = parse_component(component);
    if (!c) throw InvalidArgument("unknown component '" + component + "'");
    comps.push_back(*c);
  }
  const ResourceParams defaults = flags.defaults();
  const Dataset ds = load_dataset(data);
  for (ComponentId c : comps) {
    const ResourceDiagnostics d = resource_diagnostics(ds, c, defaults);
    const std::string name(component_name(c));
    {
      auto f = open_out(fs::path(out_dir) / (name + "_fres_power.csv"));
      write_scatter_csv(f, d);
    }
    write_file(fs::path(out_dir) / (name + "_diag.json"), diagnostics_to_json(d) + "\n");
    out << name << " power_spread=" << num(d.power_spread)
        << " ratio_spread=" << num(d.ratio_spread) << '\n';
  }
  return kExitOk;
}

int cmd_transfer(const std::string& model_path, const std::string& power_path,
                 const std::string& data, const std::string& target_text,
                 std::optional<double> source_power, const std::string& source_text,
                 const std::string& out_path, std::ostream& out) {
  require_input(model_path, "--model");
  LoadedModel xfer = load_model(model_path);
  if (!xfer.transfer) throw InvalidArgument("--model must be a transfer model");
  const TechnologyNode target = parse_node(target_text);
  if (source_power) {
    if (source_text.empty()) throw InvalidArgument("--source is required with --source-power");
    const TechnologyNode source = parse_node(source_text);
    out << num(predict_transferred_power(*xfer.transfer, *source_power, source, target)) << '\n';
    return kExitOk;
  }
  require_input(power_path, "--power-model");
  require_input(data, "--data");
  require_output(out_path, "--out");
  LoadedModel power = load_model(power_path);
  if (!power.power) throw InvalidArgument("--power-model must be a power model");
  const Dataset ds = load_dataset(data);
  auto csv = open_out(out_path);
  csv << "config,workload,source_node,target_node,source_power_w,target_power_w\n";
  for (const auto& s : ds.samples()) {
    const double src = predict_any(*power.power, s.config, s.events).total;
    const double dst = predict_transferred_power(*xfer.transfer, src, s.tech, target);
    csv << s.config.id << ',' << s.events.workload << ',' << s.tech.name << ',' << target.name
        << ',' << num(src) << ',' << num(dst) << '\n';
  }
  out << "wrote " << ds.size() << " transferred predictions to " << out_path << '\n';
  return kExitOk;
}

int cmd_dse(const Common& common, const std::string& power_path, const std::string& perf_path,
            const std::string& space_path, const std::string& events_source,
            const std::string& data, double constraint, double tolerance, std::size_t top_k,
            const std::string& out_path, std::ostream& out) {
  require_input(power_path, "--power-model");
  require_input(perf_path, "--perf-model");
  if (!space_path.empty()) require_input(space_path, "--space");
  require_output(out_path, "--out");
  LoadedModel power = load_model(power_path);
  LoadedModel perf = load_model(perf_path);
  if (!power.power) throw InvalidArgument("--power-model must be a power model");
  if (!perf.perf) throw InvalidArgument("--perf-model must be a performance model");
  const DesignSpace space =
      space_path.empty() ? default_design_space() : parse_design_space(read_file(space_path));

  std::unique_ptr<EventsProvider> provider;
  if (events_source == "synth") {
    provider = std::make_unique<SynthEventsProvider>(default_synth_spec(common.resolved_seed()));
  } else if (events_source == "dataset") {
    require_input(data, "--data");
    provider = std::make_unique<DatasetEventsProvider>(load_dataset(data));
  } else {
    throw InvalidArgument("unknown events source '" + events_source + "'");
  }
  ExploreOptions opts;
  opts.constraint = constraint;
  opts.tolerance = tolerance;
  opts.top_k = top_k;
  opts.jobs = common.jobs;
  const DseResult result = explore(space, *power.power, *perf.perf, *provider, opts);
  auto csv = open_out(out_path);
  write_dse_csv(csv, result);
  out << "evaluated=" << result.evaluated << " feasible=" << result.feasible;
  if (!result.ranked.empty()) {
    out << " best=" << result.ranked.front().config.id
        << " power_w=" << num(result.ranked.front().predicted_power)
        << " perf=" << num(result.ranked.front().predicted_perf);
  }
  out << '\n';
  return kExitOk;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"panda: architecture-level power, area and performance modeling"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Random seed (falls back to PANDA_SEED, then 7)");
  app.add_option("--jobs", common.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  // synth
  std::string synth_out, synth_spec;
  std::optional<double> synth_noise;
  bool include_special = false, affine = false, multitech = false;
  int designs = 24;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset or transfer corpus");
  synth->add_option("--out", synth_out, "Output file")->required();
  synth->add_option("--spec", synth_spec, "Synth spec JSON file");
  synth->add_option("--noise", synth_noise, "Relative label noise");
  synth->add_flag("--include-special", include_special, "Add SP1 and SP2");
  synth->add_flag("--affine", affine, "Affine component laws");
  synth->add_flag("--multitech", multitech, "Write a multi-node transfer corpus instead");
  synth->add_option("--designs", designs, "Small designs in the transfer corpus");
  synth->add_option("--seed", common.seed, "Random seed");

  // train
  std::string train_kind = "panda", train_data, train_out;
  TrainFlags train_flags;
  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("--kind", train_kind, "Model kind")
      ->check(CLI::IsMember({"panda", "global-ml", "component-ml", "analytical", "area", "perf",
                             "transfer"}));
  train->add_option("--data", train_data, "Dataset (or transfer corpus)")->required();
  train->add_option("--out", train_out, "Model output file")->required();
  train_flags.add(train);
  train->add_option("--jobs", common.jobs, "Worker threads");

  // predict
  std::string pred_model, pred_perf, pred_data, pred_out;
  auto* predict = app.add_subcommand("predict", "Predict power, area, cycles or energy");
  predict->add_option("--model", pred_model, "Model file")->required();
  predict->add_option("--perf-model", pred_perf, "Performance model; adds cycles and energy");
  predict->add_option("--data", pred_data, "Dataset with configs and events")->required();
  predict->add_option("--out", pred_out, "Output CSV")->required();

  // eval
  std::string eval_protocol, eval_kind = "panda", eval_data, eval_json, eval_csv, eval_pred;
  int eval_n = 0;
  TrainFlags eval_flags;
  auto* eval = app.add_subcommand("eval", "Cross-validate a model kind");
  eval->add_option("--protocol", eval_protocol, "Evaluation protocol")
      ->required()
      ->check(CLI::IsMember({"known-n", "unknown-domain", "special"}));
  eval->add_option("--kind", eval_kind, "Model kind")
      ->check(CLI::IsMember({"panda", "global-ml", "component-ml", "analytical", "area", "perf",
                             "energy"}));
  eval->add_option("--data", eval_data, "Dataset")->required();
  eval->add_option("--n", eval_n, "Known configurations per fold (known-n)");
  eval->add_option("--json", eval_json, "Report JSON output");
  eval->add_option("--csv", eval_csv, "Per-config CSV output");
  eval->add_option("--predictions", eval_pred, "Per-sample prediction CSV output");
  eval_flags.add(eval);
  eval->add_option("--jobs", common.jobs, "Worker threads");

  // diag
  std::string diag_data, diag_component = "all", diag_dir;
  TrainFlags diag_flags;
  auto* diag = app.add_subcommand("diag", "Resource-function diagnostics");
  diag->add_option("--data", diag_data, "Dataset")->required();
  diag->add_option("--component", diag_component, "Component name or 'all'");
  diag->add_option("--out-dir", diag_dir, "Output directory")->required();
  diag->add_option("--model-config", diag_flags.model_config, "Resource defaults");

  // transfer
  std::string xfer_model, xfer_power, xfer_data, xfer_target, xfer_source, xfer_out;
  std::optional<double> xfer_source_power;
  auto* transfer = app.add_subcommand("transfer", "Cross-technology power prediction");
  transfer->add_option("--model", xfer_model, "Transfer model")->required();
  transfer->add_option("--target", xfer_target, "Target node name:nm:volts")->required();
  transfer->add_option("--power-model", xfer_power, "Power model for the source node");
  transfer->add_option("--data", xfer_data, "Dataset at the source node");
  transfer->add_option("--out", xfer_out, "Output CSV");
  transfer->add_option("--source-power", xfer_source_power, "Single source-node power (W)");
  transfer->add_option("--source", xfer_source, "Source node name:nm:volts (with --source-power)");

  // dse
  std::string dse_power, dse_perf, dse_space, dse_events = "synth", dse_data, dse_out;
  double dse_constraint = 0.8, dse_tolerance = 0.0;
  std::size_t dse_top = 10;
  auto* dse = app.add_subcommand("dse", "Design-space exploration under a power constraint");
  dse->add_option("--power-model", dse_power, "Power model")->required();
  dse->add_option("--perf-model", dse_perf, "Performance model")->required();
  dse->add_option("--space", dse_space, "Design space JSON (default: built-in grid)");
  dse->add_option("--events", dse_events, "Events source")->check(CLI::IsMember({"synth", "dataset"}));
  dse->add_option("--data", dse_data, "Dataset for the dataset events source");
  dse->add_option("--constraint", dse_constraint, "Power constraint (W)");
  dse->add_option("--tolerance", dse_tolerance, "Relative tolerance on the constraint");
  dse->add_option("--top-k", dse_top, "Candidates to keep (0 = all feasible)");
  dse->add_option("--out", dse_out, "Result CSV")->required();
  dse->add_option("--seed", common.seed, "Seed of the synthetic events source");
  dse->add_option("--jobs", common.jobs, "Worker threads");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "panda: usage error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (*synth) {
      return cmd_synth(common, synth_out, synth_spec, synth_noise, include_special, affine,
                       multitech, designs, out);
    }
    if (*train) return cmd_train(common, train_kind, train_data, train_out, train_flags, out);
    if (*predict) return cmd_predict(pred_model, pred_perf, pred_data, pred_out, out);
    if (*eval) {
      return cmd_eval(common, eval_protocol, eval_kind, eval_data, eval_n, eval_json, eval_csv,
                      eval_pred, eval_flags, out);
    }
    if (*diag) return cmd_diag(diag_data, diag_component, diag_dir, diag_flags, out);
    if (*transfer) {
      return cmd_transfer(xfer_model, xfer_power, xfer_data, xfer_target, xfer_source_power,
                          xfer_source, xfer_out, out);
    }
    if (*dse) {
      return cmd_dse(common, dse_power, dse_perf, dse_space, dse_events, dse_data, dse_constraint,
                     dse_tolerance, dse_top, dse_out, out);
    }
  } catch (const ModelError& e) {
    err << "panda: model error: " << one_line(e.what()) << '\n';
    return kExitModel;
  } catch (const ParseError& e) {
    err << "panda: data error: " << one_line(e.what()) << '\n';
    return kExitData;
  } catch (const InvariantError& e) {
    err << "panda: data error: " << one_line(e.what()) << '\n';
    return kExitData;
  } catch (const InvalidArgument& e) {
    err << "panda: usage error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "panda: data error: " << one_line(e.what()) << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace panda::cli
