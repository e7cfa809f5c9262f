#include "panda/resource.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "panda/dataset.hpp"
#include "panda/error.hpp"
#include "panda/log.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

double ResourceParams::reserve_stations(int decode_width) const {
  if (reserve_station_lookup.empty()) return static_cast<double>(decode_width);
  auto it = reserve_station_lookup.find(decode_width);
  if (it == reserve_station_lookup.end()) {
    throw InvalidArgument("reserve-station lookup has no entry for DecodeWidth=" +
                          std::to_string(decode_width));
  }
  return it->second;
}

bool requires_bias(ComponentId component) {
  return component == ComponentId::kITLB || component == ComponentId::kDTLB ||
         component == ComponentId::kOtherLogic;
}

Param bias_driver(ComponentId component) {
  switch (component) {
    case ComponentId::kITLB:
    case ComponentId::kDTLB:
      return Param::kDTLBEntry;
    case ComponentId::kOtherLogic:
      return Param::kDecodeWidth;
    default:
      throw InvalidArgument("component " + std::string(component_name(component)) +
                            " has no bias");
  }
}

double eval_resource(ComponentId component, const DesignConfiguration& c,
                     const ResourceParams& params) {
  if (requires_bias(component) && !params.fitted) {
    throw InvalidArgument("resource function of " + std::string(component_name(component)) +
                          " needs fitted parameters");
  }
  switch (component) {
    case ComponentId::kBP:
      return c.fetch_width;
    case ComponentId::kIFU:
      return c.decode_width;
    case ComponentId::kITLB:
      return c.dtlb_entry + params.itlb_bias;
    case ComponentId::kICache:
      return static_cast<double>(c.icache_way) * c.icache_fetch_bytes;
    case ComponentId::kRNU:
      return c.decode_width;
    case ComponentId::kROB:
      return c.rob_entry;
    case ComponentId::kISU:
      return params.reserve_stations(c.decode_width);
    case ComponentId::kRegfile:
      return static_cast<double>(c.int_phy_register) + c.fp_phy_register;
    case ComponentId::kFUPool:
      return 1.0;
    case ComponentId::kLSU:
      return static_cast<double>(c.ldq_entry) + c.stq_entry;
    case ComponentId::kDTLB:
      return c.dtlb_entry + params.dtlb_bias;
    case ComponentId::kDCache:
      return static_cast<double>(c.dcache_way) * c.mem_issue_width;
    case ComponentId::kOtherLogic:
      return c.decode_width + params.otherlogic_bias;
  }
  throw InvalidArgument("unknown component");
}

namespace {

struct BiasFit {
  double bias = 0.0;
  BiasSource source = BiasSource::kDefault;
};

BiasFit fit_bias(ComponentId component, const Dataset& train, double default_bias,
                 LabelKind label) {
  const Param driver = bias_driver(component);
  // Per-config mean label, in order of first appearance.
  std::map<std::string, std::pair<double, int>, std::less<>> sums;
  std::vector<std::pair<std::string, double>> xs;
  for (const auto& s : train.samples()) {
    const auto& labels = label == LabelKind::kPower ? s.component_power : s.component_area;
    if (!labels) {
      throw InvariantError("sample for config '" + s.config.id + "' lacks component " +
                           (label == LabelKind::kPower ? "power" : "area") + " labels");
    }
    auto [it, inserted] = sums.try_emplace(s.config.id, 0.0, 0);
    if (inserted) xs.emplace_back(s.config.id, get_param(s.config, driver));
    it->second.first += (*labels)[component];
    it->second.second += 1;
  }

  std::set<double> distinct;
  for (const auto& [id, x] : xs) distinct.insert(x);
  const std::string name(component_name(component));
  if (distinct.size() < 2) {
    warn(name + " bias: fewer than two distinct " + std::string(param_name(driver)) +
         " values in training data; using default bias " + std::to_string(default_bias));
    return {default_bias, BiasSource::kDefault};
  }

  double mean_x = 0.0, mean_y = 0.0;
  std::vector<std::pair<double, double>> points;
  for (const auto& [id, x] : xs) {
    const auto& [sum, count] = sums.find(id)->second;
    points.emplace_back(x, sum / count);
  }
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : points) {
    sxy += (x - mean_x) * (y - mean_y);
    sxx += (x - mean_x) * (x - mean_x);
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    warn(name + " bias: fitted slope is not positive; using default bias " +
         std::to_string(default_bias));
    return {default_bias, BiasSource::kDefault};
  }
  const double bias = intercept / slope;
  if (bias < 0.0) {
    warn(name + " bias: fitted value " + std::to_string(bias) + " is negative; clamped to 0");
    return {0.0, BiasSource::kClamped};
  }
  return {bias, BiasSource::kFitted};
}

}  // namespace

ResourceParams fit_resource_params(const Dataset& train, const ResourceParams& defaults,
                                   LabelKind label) {
  if (train.empty()) throw InvalidArgument("cannot fit resource parameters on an empty dataset");
  ResourceParams out = defaults;
  auto itlb = fit_bias(ComponentId::kITLB, train, defaults.itlb_bias, label);
  auto dtlb = fit_bias(ComponentId::kDTLB, train, defaults.dtlb_bias, label);
  auto other = fit_bias(ComponentId::kOtherLogic, train, defaults.otherlogic_bias, label);
  out.itlb_bias = itlb.bias;
  out.itlb_source = itlb.source;
  out.dtlb_bias = dtlb.bias;
  out.dtlb_source = dtlb.source;
  out.otherlogic_bias = other.bias;
  out.otherlogic_source = other.source;
  out.fitted = true;
  return out;
}

ResourceParams parse_resource_defaults(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("model config: malformed JSON: ") + e.what());
  }
  ObjectReader reader(j, "model_config");
  ResourceParams params;
  if (const json* lookup = reader.optional("reserve_station_lookup")) {
    if (!lookup->is_object()) throw ParseError("model_config.reserve_station_lookup: expected an object");
    for (auto it = lookup->begin(); it != lookup->end(); ++it) {
      int width = 0;
      try {
        std::size_t used = 0;
        width = std::stoi(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument(it.key());
      } catch (const std::exception&) {
        throw ParseError("model_config.reserve_station_lookup: key '" + it.key() +
                         "' is not an integer DecodeWidth");
      }
      double stations = ObjectReader::as_number(*it, "model_config.reserve_station_lookup");
      if (!(stations > 0.0)) {
        throw InvariantError("model_config.reserve_station_lookup: entries must be positive");
      }
      params.reserve_station_lookup[width] = stations;
    }
  }
  if (const json* biases = reader.optional("default_biases")) {
    ObjectReader b(*biases, "model_config.default_biases");
    if (const json* v = b.optional("itlb")) params.itlb_bias = ObjectReader::as_number(*v, b.field("itlb"));
    if (const json* v = b.optional("dtlb")) params.dtlb_bias = ObjectReader::as_number(*v, b.field("dtlb"));
    if (const json* v = b.optional("other_logic")) {
      params.otherlogic_bias = ObjectReader::as_number(*v, b.field("other_logic"));
    }
    b.finish();
    if (params.itlb_bias < 0 || params.dtlb_bias < 0 || params.otherlogic_bias < 0) {
      throw InvariantError("model_config.default_biases: biases must be non-negative");
    }
  }
  reader.finish();
  return params;
}

ResourceParams load_resource_defaults(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_resource_defaults(buffer.str());
}

namespace detail {

namespace {
std::string_view source_name(BiasSource s) {
  switch (s) {
    case BiasSource::kDefault:
      return "default";
    case BiasSource::kFitted:
      return "fitted";
    case BiasSource::kClamped:
      return "clamped";
  }
  return "default";
}

BiasSource parse_source(const json& j) {
  auto s = ObjectReader::as_string(j, "bias source");
  if (s == "default") return BiasSource::kDefault;
  if (s == "fitted") return BiasSource::kFitted;
  if (s == "clamped") return BiasSource::kClamped;
  throw ParseError("unknown bias source '" + s + "'");
}
}  // namespace

json resource_params_to_json(const ResourceParams& p) {
  json lookup = json::object();
  for (const auto& [w, r] : p.reserve_station_lookup) lookup[std::to_string(w)] = r;
  return json{{"itlb_bias", p.itlb_bias},
              {"dtlb_bias", p.dtlb_bias},
              {"otherlogic_bias", p.otherlogic_bias},
              {"itlb_source", source_name(p.itlb_source)},
              {"dtlb_source", source_name(p.dtlb_source)},
              {"otherlogic_source", source_name(p.otherlogic_source)},
              {"reserve_station_lookup", lookup},
              {"fitted", p.fitted}};
}

ResourceParams resource_params_from_json(const json& j) {
  ObjectReader r(j, "resource_params");
  ResourceParams p;
  p.itlb_bias = r.number("itlb_bias");
  p.dtlb_bias = r.number("dtlb_bias");
  p.otherlogic_bias = r.number("otherlogic_bias");
  p.itlb_source = parse_source(r.required("itlb_source"));
  p.dtlb_source = parse_source(r.required("dtlb_source"));
  p.otherlogic_source = parse_source(r.required("otherlogic_source"));
  const json& lookup = r.required("reserve_station_lookup");
  if (!lookup.is_object()) throw ParseError("resource_params.reserve_station_lookup: expected an object");
  for (auto it = lookup.begin(); it != lookup.end(); ++it) {
    p.reserve_station_lookup[std::stoi(it.key())] =
        ObjectReader::as_number(*it, "resource_params.reserve_station_lookup");
  }
  p.fitted = r.boolean("fitted");
  r.finish();
  return p;
}

}  // namespace detail

}  // namespace panda
