#include "panda/dse.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "panda/error.hpp"
#include "panda/parallel.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

namespace {

int operand_value(const RuleOperand& o, const DesignConfiguration& c) {
  return o.param ? get_param(c, *o.param) : o.constant;
}

std::string operand_text(const RuleOperand& o) {
  return o.param ? std::string(param_name(*o.param)) : std::to_string(o.constant);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

RuleOperand parse_operand(std::string_view text, std::string_view rule) {
  text = trim(text);
  RuleOperand o;
  if (text.empty()) throw InvalidArgument("rule '" + std::string(rule) + "' has an empty operand");
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && ptr == text.data() + text.size()) {
    o.constant = value;
    return o;
  }
  o.param = parse_param(text);
  if (!o.param) {
    throw InvalidArgument("rule '" + std::string(rule) + "': unknown parameter '" +
                          std::string(text) + "'");
  }
  return o;
}

}  // namespace

bool CouplingRule::holds(const DesignConfiguration& c) const {
  const int a = operand_value(lhs, c);
  const int b = operand_value(rhs, c);
  switch (op) {
    case RuleOp::kLe:
      return a <= b;
    case RuleOp::kLt:
      return a < b;
    case RuleOp::kGe:
      return a >= b;
    case RuleOp::kGt:
      return a > b;
    case RuleOp::kEq:
      return a == b;
    case RuleOp::kNe:
      return a != b;
  }
  return false;
}

std::string CouplingRule::to_string() const {
  static constexpr const char* kOps[] = {"<=", "<", ">=", ">", "==", "!="};
  return operand_text(lhs) + kOps[static_cast<int>(op)] + operand_text(rhs);
}

CouplingRule parse_rule(std::string_view text) {
  // Two-character operators first so "<=" is not read as "<".
  static constexpr std::pair<std::string_view, RuleOp> kOps[] = {
      {"<=", RuleOp::kLe}, {">=", RuleOp::kGe}, {"==", RuleOp::kEq},
      {"!=", RuleOp::kNe}, {"<", RuleOp::kLt},  {">", RuleOp::kGt},
  };
  for (const auto& [sym, op] : kOps) {
    auto pos = text.find(sym);
    if (pos == std::string_view::npos) continue;
    CouplingRule rule;
    rule.op = op;
    rule.lhs = parse_operand(text.substr(0, pos), text);
    rule.rhs = parse_operand(text.substr(pos + sym.size()), text);
    return rule;
  }
  throw InvalidArgument("rule '" + std::string(text) + "' has no comparison operator");
}

std::size_t DesignSpace::grid_size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

void DesignSpace::validate() const {
  std::set<Param> seen;
  for (const auto& a : axes) {
    if (a.params.empty()) throw InvalidArgument("design space axis has no parameters");
    if (a.values.empty()) {
      throw InvalidArgument("design space axis " + std::string(param_name(a.params.front())) +
                            " has no values");
    }
    for (Param p : a.params) {
      if (!seen.insert(p).second) {
        throw InvalidArgument("parameter " + std::string(param_name(p)) + " appears on two axes");
      }
    }
  }
}

std::vector<DesignConfiguration> enumerate(const DesignSpace& space) {
  space.validate();
  std::vector<DesignConfiguration> out;
  const std::size_t total = space.grid_size();
  std::vector<std::size_t> digit(space.axes.size(), 0);
  for (std::size_t index = 0; index < total; ++index) {
    DesignConfiguration c = space.base;
    c.id = "D" + std::to_string(index + 1);
    for (std::size_t a = 0; a < space.axes.size(); ++a) {
      for (Param p : space.axes[a].params) set_param(c, p, space.axes[a].values[digit[a]]);
    }
    bool keep = std::all_of(space.rules.begin(), space.rules.end(),
                            [&](const CouplingRule& r) { return r.holds(c); });
    if (keep) {
      try {
        validate(c);
      } catch (const InvariantError&) {
        keep = false;
      }
    }
    if (keep) out.push_back(std::move(c));
    // Odometer step, last axis fastest.
    for (std::size_t a = space.axes.size(); a-- > 0;) {
      if (++digit[a] < space.axes[a].values.size()) break;
      digit[a] = 0;
    }
  }
  if (out.empty()) throw InvalidArgument("design space is empty after applying its rules");
  return out;
}

DesignSpace parse_design_space(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("design space: malformed JSON: ") + e.what());
  }
  ObjectReader r(j, "space");
  DesignSpace space;
  const json& base = r.required("base");
  if (base.is_string()) {
    try {
      space.base = builtin_configuration(base.get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ParseError(std::string("space.base: ") + e.what());
    }
  } else {
    space.base = detail::config_from_json(base, "space.base");
  }
  const json& axes = r.required("axes");
  if (!axes.is_array()) throw ParseError("space.axes: expected an array");
  for (const auto& a : axes) {
    ObjectReader ar(a, "space.axes");
    GridAxis axis;
    const json& params = ar.required("params");
    const json& values = ar.required("values");
    if (!params.is_array() || !values.is_array()) {
      throw ParseError("space.axes: params and values must be arrays");
    }
    for (const auto& p : params) {
      auto name = ObjectReader::as_string(p, "space.axes.params");
      auto param = parse_param(name);
      if (!param) throw ParseError("space.axes: unknown parameter '" + name + "'");
      axis.params.push_back(*param);
    }
    for (const auto& v : values) axis.values.push_back(ObjectReader::as_int(v, "space.axes.values"));
    ar.finish();
    space.axes.push_back(std::move(axis));
  }
  if (const json* rules = r.optional("rules")) {
    if (!rules->is_array()) throw ParseError("space.rules: expected an array");
    for (const auto& rule : *rules) {
      try {
        space.rules.push_back(parse_rule(ObjectReader::as_string(rule, "space.rules")));
      } catch (const InvalidArgument& e) {
        throw ParseError(std::string("space.rules: ") + e.what());
      }
    }
  }
  r.finish();
  try {
    space.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("space: ") + e.what());
  }
  return space;
}

DesignSpace default_design_space() {
  using P = Param;
  DesignSpace s;
  s.base = builtin_configuration("C15");
  s.base.id.clear();
  s.axes = {
      {{P::kDecodeWidth}, {1, 2, 3, 4, 5}},
      {{P::kFetchWidth}, {4, 8}},
      {{P::kRobEntry}, {32, 64, 96, 128}},
      {{P::kIntPhyRegister, P::kFpPhyRegister}, {64, 96, 128}},
      {{P::kLDQEntry, P::kSTQEntry}, {8, 16, 24, 32}},
      {{P::kIntIssueWidth}, {1, 2, 3, 4}},
      {{P::kDCacheWay, P::kICacheWay}, {4, 8}},
      {{P::kMemIssueWidth, P::kFpIssueWidth}, {1, 2}},
  };
  s.rules = {parse_rule("IntIssueWidth<=DecodeWidth"), parse_rule("DecodeWidth<=FetchWidth")};
  return s;
}

SynthEventsProvider::SynthEventsProvider(SynthSpec spec) : oracle_(std::move(spec)) {}

std::vector<EventVector> SynthEventsProvider::events_for(const DesignConfiguration& config) const {
  std::vector<EventVector> out;
  for (std::size_t w = 0; w < oracle_.spec().workloads.size(); ++w) {
    out.push_back(oracle_.run(config, w).events);
  }
  return out;
}

DatasetEventsProvider::DatasetEventsProvider(const Dataset& dataset) {
  if (dataset.empty()) throw InvalidArgument("events provider needs a non-empty dataset");
  configs_ = dataset.configurations();
  std::vector<std::string> workloads;
  for (const auto& c : configs_) {
    std::vector<EventVector> ev;
    for (const auto& s : dataset.samples()) {
      if (s.config.id == c.id) ev.push_back(s.events);
    }
    std::vector<std::string> names;
    for (const auto& e : ev) names.push_back(e.workload);
    if (workloads.empty()) {
      workloads = names;
    } else if (names != workloads) {
      throw InvariantError("config '" + c.id + "' does not cover the same workloads as '" +
                           configs_.front().id + "'");
    }
    events_.push_back(std::move(ev));
  }
}

std::vector<EventVector> DatasetEventsProvider::events_for(const DesignConfiguration& config) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < configs_.size(); ++i) {
    double d = 0.0;
    for (Param p : all_params()) {
      const double diff = std::log2(get_param(config, p)) - std::log2(get_param(configs_[i], p));
      d += diff * diff;
    }
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return events_[best];
}

DseCandidate score_candidate(const DesignConfiguration& config, const AnyPowerModel& power,
                             const PerfCalibrator& perf, const EventsProvider& events,
                             const std::vector<double>& reference_cycles) {
  const auto ev = events.events_for(config);
  if (ev.size() != reference_cycles.size() || ev.empty()) {
    throw InvalidArgument("events provider returned an inconsistent number of workloads");
  }
  DseCandidate cand;
  cand.config = config;
  double p = 0.0, speedup = 0.0;
  for (std::size_t w = 0; w < ev.size(); ++w) {
    p += predict_any(power, config, ev[w]).total;
    speedup += reference_cycles[w] / predict_cycles(perf, config, ev[w]);
  }
  cand.predicted_power = p / static_cast<double>(ev.size());
  cand.predicted_perf = speedup / static_cast<double>(ev.size());
  return cand;
}

DseResult explore(const DesignSpace& space, const AnyPowerModel& power, const PerfCalibrator& perf,
                  const EventsProvider& events, const ExploreOptions& options) {
  if (!(options.constraint > 0.0)) throw InvalidArgument("power constraint must be positive");
  if (!(options.tolerance >= 0.0)) throw InvalidArgument("tolerance must be non-negative");
  const auto configs = enumerate(space);

  std::vector<double> reference_cycles;
  for (const auto& ev : events.events_for(options.reference)) {
    reference_cycles.push_back(predict_cycles(perf, options.reference, ev));
  }

  std::vector<DseCandidate> scored(configs.size());
  parallel_for(configs.size(), options.jobs, [&](std::size_t i) {
    scored[i] = score_candidate(configs[i], power, perf, events, reference_cycles);
    scored[i].index = i;
  });

  DseResult result;
  result.constraint = options.constraint;
  result.tolerance = options.tolerance;
  result.evaluated = scored.size();
  const double limit = options.constraint * (1.0 + options.tolerance);
  for (auto& c : scored) {
    if (c.predicted_power <= limit) result.ranked.push_back(std::move(c));
  }
  result.feasible = result.ranked.size();
  if (result.ranked.empty()) {
    throw InvalidArgument("no candidate meets the power constraint of " +
                          std::to_string(options.constraint) + " W");
  }
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const DseCandidate& a, const DseCandidate& b) {
                     return a.predicted_perf > b.predicted_perf;
                   });
  if (options.top_k > 0 && result.ranked.size() > options.top_k) {
    result.ranked.resize(options.top_k);
  }
  return result;
}

void write_dse_csv(std::ostream& out, const DseResult& result) {
  out << "rank,id";
  for (Param p : all_params()) out << ',' << param_name(p);
  out << ",predicted_power_w,predicted_perf\n";
  auto num = [](double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    const auto& c = result.ranked[i];
    out << i + 1 << ',' << c.config.id;
    for (Param p : all_params()) out << ',' << get_param(c.config, p);
    out << ',' << num(c.predicted_power) << ',' << num(c.predicted_perf) << '\n';
  }
}

}  // namespace panda
