#include "panda/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "panda/error.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

namespace {

std::string describe(const Sample& s, std::size_t index) {
  return "sample " + std::to_string(index + 1) + " (config '" + s.config.id + "', workload '" +
         s.events.workload + "')";
}

void check_non_negative(double v, const std::string& what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvariantError(what + " must be non-negative");
}

json per_component_numbers(const PerComponent<double>& values) {
  return detail::per_component_to_json(values, [](double v) { return json(v); });
}

PerComponent<double> per_component_numbers(const json& j, const std::string& context) {
  return detail::per_component_from_json<double>(j, context, [&](const json& v) {
    return ObjectReader::as_number(v, context);
  });
}

}  // namespace

namespace detail {

json config_to_json(const DesignConfiguration& config) {
  json j = json::object();
  j["id"] = config.id;
  for (Param p : all_params()) j[std::string(param_name(p))] = get_param(config, p);
  return j;
}

DesignConfiguration config_from_json(const json& j, const std::string& context) {
  ObjectReader reader(j, context);
  DesignConfiguration c;
  c.id = reader.string("id");
  for (Param p : all_params()) set_param(c, p, reader.integer(param_name(p)));
  reader.finish();
  return c;
}

json tech_to_json(const TechnologyNode& node) {
  return json{{"name", node.name},
              {"feature_size_nm", node.feature_size_nm},
              {"voltage_v", node.voltage_v}};
}

TechnologyNode tech_from_json(const json& j, const std::string& context) {
  ObjectReader reader(j, context);
  TechnologyNode node;
  node.name = reader.string("name");
  node.feature_size_nm = reader.number("feature_size_nm");
  node.voltage_v = reader.number("voltage_v");
  reader.finish();
  return node;
}

}  // namespace detail

void validate(const Sample& sample) {
  validate(sample.config);
  validate(sample.tech);
  validate(sample.events);
  check_non_negative(sample.total_power, "total_power");
  if (sample.component_power) {
    double sum = 0.0;
    for (ComponentId c : kAllComponents) {
      double v = (*sample.component_power)[c];
      check_non_negative(v, "component power of " + std::string(component_name(c)));
      sum += v;
    }
    if (std::abs(sum - sample.total_power) > 1e-6 * sample.total_power) {
      std::ostringstream msg;
      msg << "component powers sum to " << sum << " W but total_power is " << sample.total_power
          << " W";
      throw InvariantError(msg.str());
    }
  }
  if (sample.true_cycles) check_non_negative(*sample.true_cycles, "true cycles");
  if (sample.component_area) {
    for (ComponentId c : kAllComponents) {
      check_non_negative((*sample.component_area)[c],
                         "component area of " + std::string(component_name(c)));
    }
  }
}

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  std::map<std::string, const DesignConfiguration*, std::less<>> by_id;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    try {
      validate(s);
    } catch (const InvariantError& e) {
      throw InvariantError(describe(s, i) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(describe(s, i) + ": " + e.what());
    }
    auto [it, inserted] = by_id.emplace(s.config.id, &s.config);
    if (!inserted && !it->second->same_parameters(s.config)) {
      throw InvariantError(describe(s, i) + ": config id '" + s.config.id +
                           "' reused with different parameter values");
    }
  }
}

std::vector<std::string> Dataset::config_ids() const {
  std::vector<std::string> ids;
  std::set<std::string, std::less<>> seen;
  for (const auto& s : samples_) {
    if (seen.insert(s.config.id).second) ids.push_back(s.config.id);
  }
  return ids;
}

std::vector<DesignConfiguration> Dataset::configurations() const {
  std::vector<DesignConfiguration> configs;
  std::set<std::string, std::less<>> seen;
  for (const auto& s : samples_) {
    if (seen.insert(s.config.id).second) configs.push_back(s.config);
  }
  return configs;
}

bool Dataset::contains_config(std::string_view id) const {
  return std::any_of(samples_.begin(), samples_.end(),
                     [&](const Sample& s) { return s.config.id == id; });
}

Dataset Dataset::subset(const std::vector<std::string>& ids) const {
  std::set<std::string, std::less<>> wanted(ids.begin(), ids.end());
  Dataset out;
  for (const auto& s : samples_) {
    if (wanted.count(s.config.id)) out.samples_.push_back(s);
  }
  return out;
}

std::string sample_to_json_line(const Sample& s) {
  json j = json::object();
  j["schema"] = std::string(kDatasetSchema);
  j["config"] = detail::config_to_json(s.config);
  j["tech"] = detail::tech_to_json(s.tech);
  j["workload"] = s.events.workload;
  json events = json::object();
  for (const auto& [name, value] : s.events.counts) events[name] = value;
  j["events"] = std::move(events);
  j["baseline_cycles"] = s.events.baseline_cycles;
  j["frequency_hz"] = s.events.frequency_hz;
  json labels = json::object();
  labels["total_power_w"] = s.total_power;
  if (s.component_power) labels["component_power_w"] = per_component_numbers(*s.component_power);
  if (s.true_cycles) labels["cycles"] = *s.true_cycles;
  if (s.component_area) labels["component_area_um2"] = per_component_numbers(*s.component_area);
  j["labels"] = std::move(labels);
  return j.dump();
}

Sample sample_from_json_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line.begin(), line.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  ObjectReader reader(j, "record");
  Sample s;
  if (const json* schema = reader.optional("schema")) {
    auto v = ObjectReader::as_string(*schema, "record.schema");
    if (v != kDatasetSchema) throw ParseError("record.schema: unsupported schema '" + v + "'");
  }
  s.config = detail::config_from_json(reader.required("config"), "record.config");
  s.tech = detail::tech_from_json(reader.required("tech"), "record.tech");
  s.events.workload = reader.string("workload");
  {
    const json& events = reader.required("events");
    if (!events.is_object()) throw ParseError("record.events: expected a JSON object");
    for (auto it = events.begin(); it != events.end(); ++it) {
      if (!is_registered_event(it.key())) {
        throw ParseError("record.events: unknown event name '" + it.key() + "'");
      }
      s.events.counts[it.key()] = ObjectReader::as_number(*it, "record.events." + it.key());
    }
  }
  s.events.baseline_cycles = reader.number("baseline_cycles");
  if (const json* f = reader.optional("frequency_hz")) {
    s.events.frequency_hz = ObjectReader::as_number(*f, "record.frequency_hz");
  }
  ObjectReader labels(reader.required("labels"), "record.labels");
  s.total_power = labels.number("total_power_w");
  if (const json* cp = labels.optional("component_power_w")) {
    s.component_power = per_component_numbers(*cp, "record.labels.component_power_w");
  }
  if (const json* cyc = labels.optional("cycles")) {
    s.true_cycles = ObjectReader::as_number(*cyc, "record.labels.cycles");
  }
  if (const json* area = labels.optional("component_area_um2")) {
    s.component_area = per_component_numbers(*area, "record.labels.component_area_um2");
  }
  labels.finish();
  reader.finish();
  return s;
}

Dataset read_dataset(std::istream& in) {
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      samples.push_back(sample_from_json_line(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Dataset(std::move(samples));
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file '" + path.string() + "'");
  return read_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  for (const auto& s : dataset.samples()) out << sample_to_json_line(s) << '\n';
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  write_dataset(out, dataset);
  if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
}

SplitPlan split_known_n(const std::vector<std::string>& config_ids, int n) {
  const int m = static_cast<int>(config_ids.size());
  if (m < 2) throw InvalidArgument("known-n split needs at least two configurations");
  if (n < 1 || n >= m) {
    throw InvalidArgument("known-n split: n must be in [1, " + std::to_string(m - 1) + "], got " +
                          std::to_string(n));
  }
  const int window = m - n;
  SplitPlan plan;
  for (int k = 0; k < m; ++k) {
    Fold fold;
    std::vector<bool> tested(m, false);
    for (int w = 0; w < window; ++w) {
      int pos = (k + w) % m;
      tested[pos] = true;
      fold.test_ids.push_back(config_ids[pos]);
    }
    for (int pos = 0; pos < m; ++pos) {
      if (!tested[pos]) fold.train_ids.push_back(config_ids[pos]);
    }
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

SplitPlan split_unknown_domain(const std::vector<DesignConfiguration>& configs) {
  std::map<int, std::vector<std::string>> domains;
  for (const auto& c : configs) domains[c.decode_width].push_back(c.id);
  if (domains.size() < 2) {
    throw InvalidArgument("unknown-domain split needs at least two distinct DecodeWidth values");
  }
  SplitPlan plan;
  for (const auto& [width, ids] : domains) {
    Fold fold;
    fold.test_ids = ids;
    for (const auto& c : configs) {
      if (c.decode_width != width) fold.train_ids.push_back(c.id);
    }
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

void validate(const SplitPlan& plan, const std::vector<std::string>& known_ids) {
  std::set<std::string, std::less<>> known(known_ids.begin(), known_ids.end());
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const Fold& fold = plan.folds[f];
    std::set<std::string, std::less<>> train(fold.train_ids.begin(), fold.train_ids.end());
    for (const auto& id : fold.train_ids) {
      if (!known.count(id)) {
        throw InvalidArgument("fold " + std::to_string(f) + " references unknown config '" + id +
                              "'");
      }
    }
    for (const auto& id : fold.test_ids) {
      if (!known.count(id)) {
        throw InvalidArgument("fold " + std::to_string(f) + " references unknown config '" + id +
                              "'");
      }
      if (train.count(id)) {
        throw InvalidArgument("fold " + std::to_string(f) + " trains and tests on '" + id + "'");
      }
    }
  }
}

}  // namespace panda
