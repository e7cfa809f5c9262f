#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "panda/component.hpp"
#include "panda/config.hpp"
#include "panda/dataset.hpp"
#include "panda/transfer.hpp"

namespace panda {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Range&) const = default;
};

// Workload characteristics; each run draws one value per range from the seed.
struct WorkloadProfile {
  std::string name;
  Range instructions;
  Range branch_frac;
  Range mispredict_rate;
  Range load_frac;
  Range store_frac;
  Range fp_frac;
  Range muldiv_frac;
  Range icache_miss_rate;
  Range dcache_miss_rate;
  Range itlb_miss_rate;
  Range dtlb_miss_rate;
  Range ilp;
  bool operator==(const WorkloadProfile&) const = default;
};

// power = base + resource_coef * F^nonlinearity * (1 + activity_coef * rate) * (1 + eps)
// where F is the resource function under the oracle's true biases and rate is
// the component's driving event per cycle.
struct ComponentLaw {
  double base = 0.0;           // W
  double resource_coef = 0.0;  // W per resource unit
  double activity_coef = 0.0;  // per (events / cycle)
  double nonlinearity = 1.0;
  bool operator==(const ComponentLaw&) const = default;
};

// area = base + resource_coef * F^nonlinearity * (1 + eps), per config.
struct AreaLaw {
  double base = 0.0;           // um^2
  double resource_coef = 0.0;  // um^2 per resource unit
  double nonlinearity = 1.0;
  bool operator==(const AreaLaw&) const = default;
};

struct SynthSpec {
  std::uint64_t seed = 7;
  std::vector<DesignConfiguration> configs;
  std::vector<WorkloadProfile> workloads;
  double noise_rel = 0.05;
  PerComponent<ComponentLaw> component_laws{};
  PerComponent<AreaLaw> area_laws{};
  double itlb_bias = 4.0;
  double dtlb_bias = 6.0;
  double otherlogic_bias = 1.5;
  TechnologyNode tech{"tsmc40", 40.0, 1.1};
  double frequency_hz = 1e9;

  // Throws InvalidArgument.
  void validate() const;
  bool operator==(const SynthSpec&) const = default;
};

const std::vector<WorkloadProfile>& default_workloads();

// C1..C15 (plus SP1, SP2 when `include_special`) under the default workloads
// and laws.
SynthSpec default_synth_spec(std::uint64_t seed, bool include_special = false);

// Replaces every law by an affine one (nonlinearity 1, no activity term).
void make_affine(SynthSpec& spec);

// Driving event of each component's activity term.
std::string_view driving_event(ComponentId c);

// Noise-free F under the oracle's biases.
double oracle_resource(const SynthSpec& spec, ComponentId c, const DesignConfiguration& config);

// Everything the oracle knows about one (config, workload) run.
struct OracleRun {
  EventVector events;
  double true_cycles = 0.0;
  PerComponent<double> power{};  // W
  PerComponent<double> area{};   // um^2
};

// Deterministic evaluator. Random streams are keyed by (seed, parameter
// values, workload name), so a run does not depend on which other configs are
// generated or on their order.
class SynthOracle {
 public:
  explicit SynthOracle(SynthSpec spec);

  const SynthSpec& spec() const { return spec_; }
  OracleRun run(const DesignConfiguration& config, std::size_t workload) const;

 private:
  struct DrawnWorkload {
    std::string name;
    double instructions, branch_frac, mispredict_rate, load_frac, store_frac, fp_frac,
        muldiv_frac, icache_miss_rate, dcache_miss_rate, itlb_miss_rate, dtlb_miss_rate, ilp;
  };
  SynthSpec spec_;
  std::vector<DrawnWorkload> drawn_;
};

// One sample per (config, workload), configs outer.
Dataset generate(const SynthSpec& spec);

struct MultiTechSpec {
  std::uint64_t seed = 7;
  int designs = 24;
  double noise_rel = 0.03;
  // Systematic deviation from CV^2 scaling: (feature_size / reference)^exponent.
  double size_exponent = -0.45;
  // Reference power range of the small designs at the first node.
  Range reference_power{0.005, 0.2};
  void validate() const;
};

// Three nodes: 28nm/0.8V, 40nm/1.1V, 65nm/1.2V.
std::vector<TechnologyNode> default_nodes();

// One sample per design and ordered node pair, designs outer. Throws
// InvalidArgument for fewer than 2 nodes.
std::vector<TransferSample> generate_multitech(const MultiTechSpec& spec,
                                               const std::vector<TechnologyNode>& nodes);

// Spec file (JSON): every field optional except that configs are given by
// builtin id or full parameter object.
SynthSpec parse_synth_spec(std::string_view json_text);
std::string synth_spec_to_json(const SynthSpec& spec);

}  // namespace panda
