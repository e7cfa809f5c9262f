#include "panda/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "panda/error.hpp"
#include "panda/log.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

namespace {

void check_node(const TechnologyNode& n) {
  if (!(n.feature_size_nm > 0.0) || !(n.voltage_v > 0.0)) {
    throw InvalidArgument("technology node '" + n.name + "' needs positive feature size and voltage");
  }
}

}  // namespace

void validate(const TransferSample& s) {
  validate(s.source);
  validate(s.target);
  if (!(s.source_power > 0.0) || !(s.target_power > 0.0) || !std::isfinite(s.source_power) ||
      !std::isfinite(s.target_power)) {
    throw InvariantError("transfer sample '" + s.design_id + "': powers must be positive");
  }
  if (s.source == s.target) {
    throw InvariantError("transfer sample '" + s.design_id + "': source and target nodes are equal");
  }
}

double cv2_scale(double power, const TechnologyNode& source, const TechnologyNode& target) {
  check_node(source);
  check_node(target);
  const double v = target.voltage_v / source.voltage_v;
  return power * (target.feature_size_nm / source.feature_size_nm) * (v * v);
}

FeatureRow build_transfer_features(double source_power, const TechnologyNode& source,
                                   const TechnologyNode& target) {
  FeatureRow row;
  row.names = {"source_power", "feature_size_ratio", "voltage_ratio", "cv2_scaled_power"};
  const double scaled = cv2_scale(source_power, source, target);
  row.values = {source_power, target.feature_size_nm / source.feature_size_nm,
                target.voltage_v / source.voltage_v, scaled};
  return row;
}

TransferModel train_transfer(const std::vector<TransferSample>& samples, const TrainOptions& opts) {
  opts.validate();
  if (samples.size() < 2) throw InvalidArgument("transfer training needs at least two samples");
  std::set<std::pair<std::string, std::string>> pairs;
  FeatureTable table;
  std::vector<double> labels;
  for (const auto& s : samples) {
    validate(s);
    pairs.emplace(s.source.name, s.target.name);
    FeatureRow row = build_transfer_features(s.source_power, s.source, s.target);
    if (table.num_columns() == 0) table = FeatureTable(row.names);
    table.add_row(row);
    labels.push_back(s.target_power / s.source_power);
  }
  if (pairs.size() < 2) warn("transfer training data covers a single node pair");
  TransferModel model;
  model.ensemble = fit(table, labels, opts);
  model.trained = true;
  return model;
}

double predict_transferred_power(const TransferModel& model, double source_prediction,
                                 const TechnologyNode& source, const TechnologyNode& target) {
  if (!model.trained) throw ModelError("transfer model is not trained");
  const double ratio =
      model.ensemble.predict(build_transfer_features(source_prediction, source, target));
  return std::max(0.0, source_prediction * ratio);
}

std::string serialize(const TransferModel& model) {
  if (!model.trained) throw ModelError("cannot serialize an untrained transfer model");
  return json{{"format", std::string(kTransferFormat)},
              {"ensemble", detail::ensemble_to_json(model.ensemble)}}
      .dump();
}

TransferModel deserialize_transfer(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  detail::expect_format(doc, kTransferFormat);
  return detail::guard_payload([&] {
    ObjectReader r(doc, "transfer");
    r.required("format");
    TransferModel model;
    model.ensemble = detail::ensemble_from_json(r.required("ensemble"));
    r.finish();
    model.trained = true;
    return model;
  });
}

std::vector<TransferSample> read_transfer_samples(std::istream& in) {
  std::vector<TransferSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(where + ": malformed JSON: " + e.what());
    }
    try {
      ObjectReader r(j, "transfer_sample");
      TransferSample s;
      s.design_id = r.string("design_id");
      s.source = detail::tech_from_json(r.required("source"), "transfer_sample.source");
      s.target = detail::tech_from_json(r.required("target"), "transfer_sample.target");
      s.source_power = r.number("source_power_w");
      s.target_power = r.number("target_power_w");
      r.finish();
      validate(s);
      out.push_back(std::move(s));
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const InvariantError& e) {
      throw InvariantError(where + ": " + e.what());
    }
  }
  return out;
}

std::vector<TransferSample> load_transfer_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open transfer corpus '" + path.string() + "'");
  return read_transfer_samples(in);
}

void write_transfer_samples(std::ostream& out, const std::vector<TransferSample>& samples) {
  for (const auto& s : samples) {
    out << json{{"design_id", s.design_id},
                {"source", detail::tech_to_json(s.source)},
                {"target", detail::tech_to_json(s.target)},
                {"source_power_w", s.source_power},
                {"target_power_w", s.target_power}}
               .dump()
        << '\n';
  }
}

void save_transfer_samples(const std::filesystem::path& path,
                           const std::vector<TransferSample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  write_transfer_samples(out, samples);
}

}  // namespace panda
