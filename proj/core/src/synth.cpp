#include "panda/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "panda/error.hpp"
#include "panda/resource.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix(h ^ splitmix(v)); }

std::uint64_t mix(std::uint64_t h, std::string_view s) {
  std::uint64_t fnv = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) fnv = (fnv ^ c) * 0x100000001b3ULL;
  return mix(mix(h, s.size()), fnv);
}

std::uint64_t config_key(std::uint64_t seed, const DesignConfiguration& c) {
  std::uint64_t h = splitmix(seed);
  for (Param p : all_params()) h = mix(h, static_cast<std::uint64_t>(get_param(c, p)));
  return h;
}

// mt19937_64 is fully specified by the standard; the conversion to [0, 1) is
// done by hand because the standard distributions are not portable.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : gen_(key) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(const Range& r) { return r.lo + (r.hi - r.lo) * uniform(); }
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::mt19937_64 gen_;
};

enum StreamTag : std::uint64_t { kWorkloadTag = 1, kRunTag = 2, kAreaTag = 3, kDesignTag = 4 };

struct LawTarget {
  double watts_at_ref;  // power at the reference config with typical activity
  double nonlinearity;
  double activity;
  double typical_rate;
  double base_frac;
};

// Calibrated against C15 so that C1 draws roughly 0.4 W and C15 roughly 1.6 W.
constexpr LawTarget kPowerTargets[kNumComponents] = {
    /* BP */ {0.08, 0.95, 2.0, 0.25, 0.05},
    /* IFU */ {0.15, 1.05, 0.8, 1.0, 0.05},
    /* ITLB */ {0.03, 0.90, 1.0, 0.5, 0.05},
    /* ICache */ {0.20, 0.95, 1.2, 0.5, 0.05},
    /* RNU */ {0.10, 1.10, 0.8, 1.0, 0.05},
    /* ROB */ {0.12, 0.90, 0.6, 1.0, 0.05},
    /* ISU */ {0.15, 1.10, 1.5, 0.5, 0.05},
    /* Regfile */ {0.20, 0.95, 0.5, 1.5, 0.05},
    /* FUPool */ {0.08, 1.00, 1.0, 0.8, 0.10},
    /* LSU */ {0.10, 0.90, 2.0, 0.3, 0.05},
    /* DTLB */ {0.03, 0.90, 1.5, 0.45, 0.05},
    /* DCache */ {0.20, 1.00, 2.0, 0.3, 0.05},
    /* OtherLogic */ {0.20, 1.00, 0.6, 1.0, 0.10},
};

struct AreaTarget {
  double um2_at_ref;
  double nonlinearity;
  double base_frac;
};

constexpr AreaTarget kAreaTargets[kNumComponents] = {
    /* BP */ {40000, 1.00, 0.10},
    /* IFU */ {60000, 1.00, 0.10},
    /* ITLB */ {15000, 0.90, 0.10},
    /* ICache */ {400000, 1.00, 0.05},
    /* RNU */ {50000, 1.10, 0.10},
    /* ROB */ {80000, 0.95, 0.05},
    /* ISU */ {70000, 1.10, 0.10},
    /* Regfile */ {200000, 1.00, 0.05},
    /* FUPool */ {150000, 1.00, 0.00},
    /* LSU */ {60000, 0.95, 0.05},
    /* DTLB */ {15000, 0.90, 0.10},
    /* DCache */ {400000, 1.00, 0.05},
    /* OtherLogic */ {300000, 1.00, 0.20},
};

ResourceParams true_params(const SynthSpec& spec) {
  ResourceParams p;
  p.itlb_bias = spec.itlb_bias;
  p.dtlb_bias = spec.dtlb_bias;
  p.otherlogic_bias = spec.otherlogic_bias;
  p.fitted = true;
  return p;
}

void default_laws(SynthSpec& spec) {
  const DesignConfiguration& ref = builtin_configuration("C15");
  for (ComponentId c : kAllComponents) {
    const LawTarget& t = kPowerTargets[index_of(c)];
    const double f = std::pow(oracle_resource(spec, c, ref), t.nonlinearity);
    ComponentLaw law;
    law.base = t.base_frac * t.watts_at_ref;
    law.nonlinearity = t.nonlinearity;
    law.activity_coef = t.activity;
    law.resource_coef = (t.watts_at_ref - law.base) / (f * (1.0 + t.activity * t.typical_rate));
    spec.component_laws[c] = law;

    const AreaTarget& a = kAreaTargets[index_of(c)];
    const double fa = std::pow(oracle_resource(spec, c, ref), a.nonlinearity);
    AreaLaw alaw;
    alaw.base = a.base_frac * a.um2_at_ref;
    alaw.nonlinearity = a.nonlinearity;
    alaw.resource_coef = (a.um2_at_ref - alaw.base) / fa;
    spec.area_laws[c] = alaw;
  }
}

WorkloadProfile profile(std::string name, Range branch, Range mispredict, Range load, Range store,
                        Range fp, Range muldiv, Range imiss, Range dmiss, Range ilp) {
  WorkloadProfile w;
  w.name = std::move(name);
  w.instructions = {1e5, 5e5};
  w.branch_frac = branch;
  w.mispredict_rate = mispredict;
  w.load_frac = load;
  w.store_frac = store;
  w.fp_frac = fp;
  w.muldiv_frac = muldiv;
  w.icache_miss_rate = imiss;
  w.dcache_miss_rate = dmiss;
  w.itlb_miss_rate = {0.0005, 0.002};
  w.dtlb_miss_rate = {0.001, 0.004};
  w.ilp = ilp;
  return w;
}

void check_range(const Range& r, const std::string& what, double lo, double hi) {
  if (!(r.lo >= lo) || !(r.hi <= hi) || !(r.lo <= r.hi)) {
    throw InvalidArgument("workload range '" + what + "' must satisfy " + std::to_string(lo) +
                          " <= lo <= hi <= " + std::to_string(hi));
  }
}

}  // namespace

const std::vector<WorkloadProfile>& default_workloads() {
  static const std::vector<WorkloadProfile> profiles = {
      profile("dhrystone", {0.15, 0.20}, {0.02, 0.05}, {0.20, 0.25}, {0.10, 0.15}, {0.0, 0.0},
              {0.01, 0.02}, {0.005, 0.010}, {0.005, 0.010}, {1.8, 2.4}),
      profile("median", {0.18, 0.22}, {0.08, 0.12}, {0.25, 0.30}, {0.05, 0.10}, {0.0, 0.0},
              {0.0, 0.0}, {0.002, 0.004}, {0.02, 0.04}, {1.5, 2.0}),
      profile("multiply", {0.08, 0.12}, {0.01, 0.03}, {0.10, 0.15}, {0.05, 0.08}, {0.0, 0.0},
              {0.15, 0.25}, {0.002, 0.004}, {0.005, 0.010}, {1.2, 1.6}),
      profile("qsort", {0.20, 0.25}, {0.10, 0.15}, {0.25, 0.30}, {0.10, 0.15}, {0.0, 0.0},
              {0.0, 0.0}, {0.004, 0.008}, {0.03, 0.05}, {1.4, 1.8}),
      profile("rsort", {0.10, 0.14}, {0.02, 0.04}, {0.30, 0.35}, {0.15, 0.20}, {0.0, 0.0},
              {0.0, 0.0}, {0.003, 0.006}, {0.06, 0.09}, {2.0, 2.6}),
      profile("towers", {0.15, 0.20}, {0.03, 0.06}, {0.20, 0.25}, {0.20, 0.25}, {0.0, 0.0},
              {0.0, 0.0}, {0.004, 0.008}, {0.01, 0.02}, {1.6, 2.0}),
      profile("spmv", {0.08, 0.10}, {0.01, 0.02}, {0.35, 0.40}, {0.05, 0.08}, {0.25, 0.35},
              {0.02, 0.04}, {0.001, 0.002}, {0.08, 0.12}, {2.2, 3.0}),
      profile("vvadd", {0.05, 0.08}, {0.005, 0.01}, {0.30, 0.35}, {0.15, 0.20}, {0.30, 0.40},
              {0.0, 0.0}, {0.001, 0.002}, {0.05, 0.08}, {2.5, 3.5}),
  };
  return profiles;
}

void SynthSpec::validate() const {
  if (configs.empty()) throw InvalidArgument("synth spec has no configurations");
  if (workloads.empty()) throw InvalidArgument("synth spec has no workloads");
  if (!(noise_rel >= 0.0 && noise_rel < 1.0)) throw InvalidArgument("noise_rel must be in [0, 1)");
  if (itlb_bias < 0 || dtlb_bias < 0 || otherlogic_bias < 0) {
    throw InvalidArgument("synth biases must be non-negative");
  }
  if (!(frequency_hz > 0.0)) throw InvalidArgument("frequency_hz must be positive");
  for (const auto& c : configs) panda::validate(c);
  panda::validate(tech);
  std::map<std::string, const DesignConfiguration*> ids;
  for (const auto& c : configs) {
    auto [it, inserted] = ids.emplace(c.id, &c);
    if (!inserted) throw InvalidArgument("synth spec repeats config id '" + c.id + "'");
  }
  std::map<std::string, int> names;
  for (const auto& w : workloads) {
    if (w.name.empty()) throw InvalidArgument("workload profile needs a name");
    if (names[w.name]++) throw InvalidArgument("synth spec repeats workload '" + w.name + "'");
    check_range(w.instructions, w.name + ".instructions", 1.0, 1e12);
    check_range(w.branch_frac, w.name + ".branch_frac", 0.0, 1.0);
    check_range(w.mispredict_rate, w.name + ".mispredict_rate", 0.0, 1.0);
    check_range(w.load_frac, w.name + ".load_frac", 0.0, 1.0);
    check_range(w.store_frac, w.name + ".store_frac", 0.0, 1.0);
    check_range(w.fp_frac, w.name + ".fp_frac", 0.0, 1.0);
    check_range(w.muldiv_frac, w.name + ".muldiv_frac", 0.0, 1.0);
    check_range(w.icache_miss_rate, w.name + ".icache_miss_rate", 0.0, 1.0);
    check_range(w.dcache_miss_rate, w.name + ".dcache_miss_rate", 0.0, 1.0);
    check_range(w.itlb_miss_rate, w.name + ".itlb_miss_rate", 0.0, 1.0);
    check_range(w.dtlb_miss_rate, w.name + ".dtlb_miss_rate", 0.0, 1.0);
    check_range(w.ilp, w.name + ".ilp", 0.1, 64.0);
    if (w.load_frac.hi + w.store_frac.hi + w.branch_frac.hi > 1.0) {
      throw InvalidArgument("workload '" + w.name + "': branch + load + store fractions exceed 1");
    }
  }
  for (ComponentId c : kAllComponents) {
    const auto& law = component_laws[c];
    const auto& area = area_laws[c];
    if (law.base < 0 || !(law.resource_coef > 0) || law.activity_coef < 0 ||
        !(law.nonlinearity > 0)) {
      throw InvalidArgument("power law of " + std::string(component_name(c)) + " is not positive");
    }
    if (area.base < 0 || !(area.resource_coef > 0) || !(area.nonlinearity > 0)) {
      throw InvalidArgument("area law of " + std::string(component_name(c)) + " is not positive");
    }
  }
}

SynthSpec default_synth_spec(std::uint64_t seed, bool include_special) {
  SynthSpec spec;
  spec.seed = seed;
  for (const auto& c : builtin_configurations()) {
    if (include_special || (c.id != "SP1" && c.id != "SP2")) spec.configs.push_back(c);
  }
  spec.workloads = default_workloads();
  default_laws(spec);
  return spec;
}

void make_affine(SynthSpec& spec) {
  for (ComponentId c : kAllComponents) {
    auto& law = spec.component_laws[c];
    const LawTarget& t = kPowerTargets[index_of(c)];
    const double f = oracle_resource(spec, c, builtin_configuration("C15"));
    law.nonlinearity = 1.0;
    law.activity_coef = 0.0;
    law.resource_coef = (t.watts_at_ref - law.base) / f;
  }
}

std::string_view driving_event(ComponentId c) {
  switch (c) {
    case ComponentId::kBP:
      return "BTBLookups";
    case ComponentId::kIFU:
      return "fetch_insts";
    case ComponentId::kITLB:
      return "itb_accesses";
    case ComponentId::kICache:
      return "icache_overallAccesses";
    case ComponentId::kRNU:
      return "renamedInsts";
    case ComponentId::kROB:
      return "rob_writes";
    case ComponentId::kISU:
      return "IssuedIntAlu";
    case ComponentId::kRegfile:
      return "intRegfileReads";
    case ComponentId::kFUPool:
      return "intAluAccesses";
    case ComponentId::kLSU:
      return "MemRead";
    case ComponentId::kDTLB:
      return "dtb_accesses";
    case ComponentId::kDCache:
      return "dcache_ReadReq_accesses";
    case ComponentId::kOtherLogic:
      return "numInsts";
  }
  return "numInsts";
}

double oracle_resource(const SynthSpec& spec, ComponentId c, const DesignConfiguration& config) {
  return eval_resource(c, config, true_params(spec));
}

SynthOracle::SynthOracle(SynthSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  for (const auto& w : spec_.workloads) {
    Stream s(mix(mix(splitmix(spec_.seed), kWorkloadTag), w.name));
    DrawnWorkload d;
    d.name = w.name;
    d.instructions = std::round(s.uniform(w.instructions));
    d.branch_frac = s.uniform(w.branch_frac);
    d.mispredict_rate = s.uniform(w.mispredict_rate);
    d.load_frac = s.uniform(w.load_frac);
    d.store_frac = s.uniform(w.store_frac);
    d.fp_frac = s.uniform(w.fp_frac);
    d.muldiv_frac = s.uniform(w.muldiv_frac);
    d.icache_miss_rate = s.uniform(w.icache_miss_rate);
    d.dcache_miss_rate = s.uniform(w.dcache_miss_rate);
    d.itlb_miss_rate = s.uniform(w.itlb_miss_rate);
    d.dtlb_miss_rate = s.uniform(w.dtlb_miss_rate);
    d.ilp = s.uniform(w.ilp);
    drawn_.push_back(d);
  }
}

OracleRun SynthOracle::run(const DesignConfiguration& c, std::size_t workload) const {
  if (workload >= drawn_.size()) throw InvalidArgument("workload index out of range");
  validate(c);
  const DrawnWorkload& w = drawn_[workload];
  const std::uint64_t key = config_key(spec_.seed, c);
  Stream stream(mix(mix(key, kRunTag), w.name));

  // Timing.
  const double n = w.instructions;
  const double decode = c.decode_width;
  const double mem_frac = w.load_frac + w.store_frac;
  const double rob_f = std::pow(c.rob_entry / 64.0, 0.25);
  const double issue_f = std::pow(c.int_issue_width / 2.0, 0.15);
  const double ipc_core = 1.0 / (1.0 / decode + 1.0 / (w.ilp * rob_f * issue_f));
  const double imiss = w.icache_miss_rate * std::pow(4.0 / c.icache_way, 0.3);
  const double dmiss = w.dcache_miss_rate * std::pow(4.0 / c.dcache_way, 0.35);
  const double mispredict = w.mispredict_rate * std::pow(12.0 / c.branch_count, 0.2);
  const double mlp = std::sqrt(std::min<double>(c.dcache_mshr, 1.0 + c.rob_entry / 32.0));
  const double cpi = 1.0 / ipc_core + w.branch_frac * mispredict * (8.0 + 2.0 * decode) +
                     mem_frac * dmiss * 30.0 / mlp + imiss * 0.5 * 12.0;
  const double true_cycles = std::round(n * cpi);
  // The baseline simulator is optimistic by a smooth, config-dependent factor.
  const double factor =
      std::clamp(1.15 + 0.04 * (decode - 1.0) + 1.5 * dmiss * mem_frac, 1.1, 1.4);
  const double cycles = std::round(true_cycles / factor);

  // Events.
  const double fetched = n * (1.0 + w.branch_frac * mispredict * 2.0 * decode);
  const double branches = n * w.branch_frac;
  const double loads = n * w.load_frac;
  const double stores = n * w.store_frac;
  const double intf = 1.0 - w.fp_frac;
  const double icache_acc = fetched * 2.0 / c.icache_fetch_bytes;
  const double icache_miss = icache_acc * imiss;
  const double dcache_read_miss = loads * dmiss;
  const double dcache_write_miss = stores * dmiss * 0.7;
  const double dcache_miss = dcache_read_miss + dcache_write_miss;
  const double tlb_scale = std::pow(16.0 / c.dtlb_entry, 0.5);
  const double itb_acc = fetched * 2.0 / c.fetch_width;
  const double dtb_acc = loads + stores;
  const double decode_busy = std::min(1.0, fetched / (cycles * decode));
  const double alu_ops = n * std::max(0.05, 1.0 - mem_frac - w.branch_frac - w.muldiv_frac);

  std::map<std::string, double, std::less<>> raw = {
      {"BTBLookups", fetched * w.branch_frac * 1.2},
      {"condPredicted", branches * 0.8},
      {"condIncorrect", branches * 0.8 * mispredict},
      {"commit_branches", branches},
      {"fetch_insts", fetched},
      {"fetch_branches", fetched * w.branch_frac},
      {"fetch_cycles", cycles * 0.9},
      {"numRefs", loads + stores},
      {"numStoreInsts", stores},
      {"numInsts", n},
      {"decode_runCycles", cycles * decode_busy},
      {"decode_blockedCycles", cycles * (1.0 - decode_busy) * 0.6},
      {"decode_decodedInsts", fetched * 0.98},
      {"numBranches", branches},
      {"intInstQueueReads", n * intf * 2.2},
      {"intInstQueueWrites", n * intf},
      {"intInstQueueWakeupAccesses", n * intf * 1.1},
      {"fpInstQueueReads", n * w.fp_frac * 2.2},
      {"fpInstQueueWrites", n * w.fp_frac},
      {"fpInstQueueWakeupAccesses", n * w.fp_frac * 1.1},
      {"itb_accesses", itb_acc},
      {"itb_misses", itb_acc * w.itlb_miss_rate * tlb_scale},
      {"icache_overallAccesses", icache_acc},
      {"icache_overallMisses", icache_miss},
      {"icache_ReadReq_mshrHits", icache_miss * 0.1},
      {"icache_ReadReq_mshrMisses", icache_miss * 0.9},
      {"icache_tagAccesses", icache_acc * 1.05},
      {"intLookups", n * intf * 1.6},
      {"renamedOperands", n * 2.1},
      {"fpLookups", n * w.fp_frac * 1.6},
      {"renamedInsts", fetched * 0.97},
      {"runCycles", cycles * decode_busy},
      {"blockCycles", cycles * (1.0 - decode_busy) * 0.5},
      {"committedMaps", n * 0.9},
      {"rob_reads", n * 1.8},
      {"rob_writes", fetched * 1.02},
      {"IssuedMemRead", loads * (1.0 - 0.5 * w.fp_frac)},
      {"IssuedMemWrite", stores * (1.0 - 0.5 * w.fp_frac)},
      {"IssuedFloatMemRead", loads * 0.5 * w.fp_frac},
      {"IssuedFloatMemWrite", stores * 0.5 * w.fp_frac},
      {"IssuedIntAlu", alu_ops * intf},
      {"IssuedIntMult", n * w.muldiv_frac * 0.8},
      {"IssuedIntDiv", n * w.muldiv_frac * 0.2},
      {"IssuedFloatMult", n * w.fp_frac * 0.3},
      {"IssuedFloatDiv", n * w.fp_frac * 0.05},
      {"intRegfileReads", n * intf * 1.7},
      {"fpRegfileReads", n * w.fp_frac * 1.7},
      {"intRegfileWrites", n * intf * 0.9},
      {"fpRegfileWrites", n * w.fp_frac * 0.9},
      {"functionCalls", branches * 0.1},
      {"intAluAccesses", alu_ops * intf * 0.95 + n * w.muldiv_frac},
      {"fpAluAccesses", n * w.fp_frac * 0.9},
      {"MemRead", loads},
      {"InstPrefetch", icache_miss * 2.0},
      {"MemWrite", stores},
      {"dtb_accesses", dtb_acc},
      {"dtb_misses", dtb_acc * w.dtlb_miss_rate * tlb_scale},
      {"dcache_ReadReq_accesses", loads},
      {"dcache_WriteReq_accesses", stores},
      {"dcache_ReadReq_misses", dcache_read_miss},
      {"dcache_WriteReq_misses", dcache_write_miss},
      {"dcache_overallMisses", dcache_miss},
      {"dcache_MshrHits", dcache_miss * 0.15},
      {"dcache_MshrMisses", dcache_miss * 0.85},
      {"dcache_tagAccesses", (loads + stores) * 1.05},
      {"idleCycles", cycles * (1.0 - std::min(1.0, n / (cycles * decode))) * 0.5},
      {"branchPred_condPredicted", branches * 0.8},
      {"branchPred_condIncorrect", branches * 0.8 * mispredict},
      {"dcache_overallMshrMisses", dcache_miss * 0.85},
  };

  OracleRun out;
  out.true_cycles = true_cycles;
  out.events.workload = w.name;
  out.events.baseline_cycles = cycles;
  out.events.frequency_hz = spec_.frequency_hz;
  for (const auto& name : event_registry()) {
    if (name == kNumCycles) {
      out.events.counts[name] = cycles;
      continue;
    }
    auto it = raw.find(name);
    if (it == raw.end()) throw InvariantError("synth oracle does not produce event '" + name + "'");
    const double jitter = 1.0 + 0.02 * stream.symmetric();
    out.events.counts[name] = std::max(0.0, std::round(it->second * jitter));
  }

  const ResourceParams truth = true_params(spec_);
  for (ComponentId comp : kAllComponents) {
    const ComponentLaw& law = spec_.component_laws[comp];
    const double f = eval_resource(comp, c, truth);
    const double rate = out.events.count(driving_event(comp)) / cycles;
    const double eps = spec_.noise_rel * stream.symmetric();
    out.power[comp] = law.base + law.resource_coef * std::pow(f, law.nonlinearity) *
                                     (1.0 + law.activity_coef * rate) * (1.0 + eps);
  }

  Stream area_stream(mix(key, kAreaTag));
  for (ComponentId comp : kAllComponents) {
    const AreaLaw& law = spec_.area_laws[comp];
    const double f = eval_resource(comp, c, truth);
    const double eps = spec_.noise_rel * area_stream.symmetric();
    out.area[comp] = law.base + law.resource_coef * std::pow(f, law.nonlinearity) * (1.0 + eps);
  }
  return out;
}

Dataset generate(const SynthSpec& spec) {
  SynthOracle oracle(spec);
  std::vector<Sample> samples;
  samples.reserve(spec.configs.size() * spec.workloads.size());
  for (const auto& config : spec.configs) {
    for (std::size_t w = 0; w < spec.workloads.size(); ++w) {
      OracleRun run = oracle.run(config, w);
      Sample s;
      s.config = config;
      s.tech = spec.tech;
      s.events = std::move(run.events);
      s.component_power = run.power;
      double total = 0.0;
      for (double p : run.power) total += p;
      s.total_power = total;
      s.true_cycles = run.true_cycles;
      s.component_area = run.area;
      samples.push_back(std::move(s));
    }
  }
  return Dataset(std::move(samples));
}

void MultiTechSpec::validate() const {
  if (designs < 1) throw InvalidArgument("multi-tech spec needs at least one design");
  if (!(noise_rel >= 0.0 && noise_rel < 1.0)) throw InvalidArgument("noise_rel must be in [0, 1)");
  if (!(reference_power.lo > 0.0) || !(reference_power.lo <= reference_power.hi)) {
    throw InvalidArgument("reference power range must be positive");
  }
  if (!std::isfinite(size_exponent)) throw InvalidArgument("size_exponent must be finite");
}

std::vector<TechnologyNode> default_nodes() {
  return {{"tsmc28", 28.0, 0.8}, {"tsmc40", 40.0, 1.1}, {"tsmc65", 65.0, 1.2}};
}

std::vector<TransferSample> generate_multitech(const MultiTechSpec& spec,
                                               const std::vector<TechnologyNode>& nodes) {
  spec.validate();
  if (nodes.size() < 2) throw InvalidArgument("multi-tech generation needs at least two nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    validate(nodes[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes[i].name == nodes[j].name) {
        throw InvalidArgument("duplicate technology node '" + nodes[i].name + "'");
      }
    }
  }
  const TechnologyNode& ref = nodes.front();
  std::vector<TransferSample> out;
  for (int d = 0; d < spec.designs; ++d) {
    const std::string id = "D" + std::to_string(d + 1);
    Stream s(mix(mix(splitmix(spec.seed), kDesignTag), id));
    const double p_ref = s.uniform(spec.reference_power);
    std::vector<double> power(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double systematic = std::pow(nodes[k].feature_size_nm / ref.feature_size_nm,
                                         spec.size_exponent);
      const double eps = spec.noise_rel * s.symmetric();
      power[k] = cv2_scale(p_ref, ref, nodes[k]) * systematic * (1.0 + eps);
    }
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = 0; b < nodes.size(); ++b) {
        if (a == b) continue;
        out.push_back({id, nodes[a], nodes[b], power[a], power[b]});
      }
    }
  }
  return out;
}

namespace {

json range_to_json(const Range& r) { return json::array({r.lo, r.hi}); }

Range range_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [lo, hi]");
  return {ObjectReader::as_number(j[0], where), ObjectReader::as_number(j[1], where)};
}

#define PANDA_WORKLOAD_FIELDS(X)                                                          \
  X(instructions) X(branch_frac) X(mispredict_rate) X(load_frac) X(store_frac) X(fp_frac) \
  X(muldiv_frac) X(icache_miss_rate) X(dcache_miss_rate) X(itlb_miss_rate) X(dtlb_miss_rate) X(ilp)

json workload_to_json(const WorkloadProfile& w) {
  json j{{"name", w.name}};
#define X(f) j[#f] = range_to_json(w.f);
  PANDA_WORKLOAD_FIELDS(X)
#undef X
  return j;
}

WorkloadProfile workload_from_json(const json& j) {
  ObjectReader r(j, "workload");
  WorkloadProfile w;
  w.name = r.string("name");
#define X(f) w.f = range_from_json(r.required(#f), r.field(#f));
  PANDA_WORKLOAD_FIELDS(X)
#undef X
  r.finish();
  return w;
}

#undef PANDA_WORKLOAD_FIELDS

}  // namespace

std::string synth_spec_to_json(const SynthSpec& spec) {
  json configs = json::array();
  for (const auto& c : spec.configs) configs.push_back(detail::config_to_json(c));
  json workloads = json::array();
  for (const auto& w : spec.workloads) workloads.push_back(workload_to_json(w));
  json laws = detail::per_component_to_json(spec.component_laws, [](const ComponentLaw& l) {
    return json{{"base", l.base},
                {"resource_coef", l.resource_coef},
                {"activity_coef", l.activity_coef},
                {"nonlinearity", l.nonlinearity}};
  });
  json area = detail::per_component_to_json(spec.area_laws, [](const AreaLaw& l) {
    return json{{"base", l.base}, {"resource_coef", l.resource_coef}, {"nonlinearity", l.nonlinearity}};
  });
  json j{{"seed", spec.seed},
         {"configs", configs},
         {"workloads", workloads},
         {"noise_rel", spec.noise_rel},
         {"component_laws", laws},
         {"area_laws", area},
         {"biases",
          {{"itlb", spec.itlb_bias}, {"dtlb", spec.dtlb_bias}, {"other_logic", spec.otherlogic_bias}}},
         {"tech", detail::tech_to_json(spec.tech)},
         {"frequency_hz", spec.frequency_hz}};
  return j.dump(2);
}

SynthSpec parse_synth_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("synth spec: malformed JSON: ") + e.what());
  }
  ObjectReader r(j, "synth_spec");
  std::uint64_t seed = 7;
  if (const json* s = r.optional("seed")) {
    if (!s->is_number_unsigned()) throw ParseError("synth_spec.seed: expected a non-negative integer");
    seed = s->get<std::uint64_t>();
  }
  SynthSpec spec = default_synth_spec(seed);
  if (const json* cs = r.optional("configs")) {
    if (!cs->is_array()) throw ParseError("synth_spec.configs: expected an array");
    spec.configs.clear();
    for (const auto& c : *cs) {
      if (c.is_string()) {
        try {
          spec.configs.push_back(builtin_configuration(c.get<std::string>()));
        } catch (const InvalidArgument& e) {
          throw ParseError(std::string("synth_spec.configs: ") + e.what());
        }
      } else {
        spec.configs.push_back(detail::config_from_json(c, "synth_spec.configs"));
      }
    }
  }
  if (const json* ws = r.optional("workloads")) {
    if (!ws->is_array()) throw ParseError("synth_spec.workloads: expected an array");
    spec.workloads.clear();
    for (const auto& w : *ws) {
      if (w.is_string()) {
        const auto name = w.get<std::string>();
        auto it = std::find_if(default_workloads().begin(), default_workloads().end(),
                               [&](const WorkloadProfile& p) { return p.name == name; });
        if (it == default_workloads().end()) {
          throw ParseError("synth_spec.workloads: unknown workload '" + name + "'");
        }
        spec.workloads.push_back(*it);
      } else {
        spec.workloads.push_back(workload_from_json(w));
      }
    }
  }
  if (const json* n = r.optional("noise_rel")) spec.noise_rel = ObjectReader::as_number(*n, "synth_spec.noise_rel");
  if (const json* laws = r.optional("component_laws")) {
    ObjectReader lr(*laws, "synth_spec.component_laws");
    for (ComponentId c : kAllComponents) {
      const json* l = lr.optional(component_name(c));
      if (!l) continue;
      ObjectReader f(*l, lr.field(component_name(c)));
      auto& law = spec.component_laws[c];
      if (const json* v = f.optional("base")) law.base = ObjectReader::as_number(*v, f.field("base"));
      if (const json* v = f.optional("resource_coef")) law.resource_coef = ObjectReader::as_number(*v, f.field("resource_coef"));
      if (const json* v = f.optional("activity_coef")) law.activity_coef = ObjectReader::as_number(*v, f.field("activity_coef"));
      if (const json* v = f.optional("nonlinearity")) law.nonlinearity = ObjectReader::as_number(*v, f.field("nonlinearity"));
      f.finish();
    }
    lr.finish();
  }
  if (const json* laws = r.optional("area_laws")) {
    ObjectReader lr(*laws, "synth_spec.area_laws");
    for (ComponentId c : kAllComponents) {
      const json* l = lr.optional(component_name(c));
      if (!l) continue;
      ObjectReader f(*l, lr.field(component_name(c)));
      auto& law = spec.area_laws[c];
      if (const json* v = f.optional("base")) law.base = ObjectReader::as_number(*v, f.field("base"));
      if (const json* v = f.optional("resource_coef")) law.resource_coef = ObjectReader::as_number(*v, f.field("resource_coef"));
      if (const json* v = f.optional("nonlinearity")) law.nonlinearity = ObjectReader::as_number(*v, f.field("nonlinearity"));
      f.finish();
    }
    lr.finish();
  }
  if (const json* b = r.optional("biases")) {
    ObjectReader br(*b, "synth_spec.biases");
    if (const json* v = br.optional("itlb")) spec.itlb_bias = ObjectReader::as_number(*v, br.field("itlb"));
    if (const json* v = br.optional("dtlb")) spec.dtlb_bias = ObjectReader::as_number(*v, br.field("dtlb"));
    if (const json* v = br.optional("other_logic")) spec.otherlogic_bias = ObjectReader::as_number(*v, br.field("other_logic"));
    br.finish();
  }
  if (const json* t = r.optional("tech")) spec.tech = detail::tech_from_json(*t, "synth_spec.tech");
  if (const json* f = r.optional("frequency_hz")) spec.frequency_hz = ObjectReader::as_number(*f, "synth_spec.frequency_hz");
  r.finish();
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw InvariantError(std::string("synth spec: ") + e.what());
  }
  return spec;
}

}  // namespace panda
