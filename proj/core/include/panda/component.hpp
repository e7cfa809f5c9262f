#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace panda {

// The thirteen individually modeled blocks of an out-of-order core.
enum class ComponentId : std::uint8_t {
  kBP,
  kIFU,
  kITLB,
  kICache,
  kRNU,
  kROB,
  kISU,
  kRegfile,
  kFUPool,
  kLSU,
  kDTLB,
  kDCache,
  kOtherLogic,
};

inline constexpr std::size_t kNumComponents = 13;

inline constexpr std::array<ComponentId, kNumComponents> kAllComponents = {
    ComponentId::kBP,     ComponentId::kIFU,     ComponentId::kITLB,
    ComponentId::kICache, ComponentId::kRNU,     ComponentId::kROB,
    ComponentId::kISU,    ComponentId::kRegfile, ComponentId::kFUPool,
    ComponentId::kLSU,    ComponentId::kDTLB,    ComponentId::kDCache,
    ComponentId::kOtherLogic,
};

enum class CpuPart : std::uint8_t { kFrontend, kExecution, kMemAccess, kOtherLogic };

constexpr std::size_t index_of(ComponentId c) { return static_cast<std::size_t>(c); }

// Short identifier used in files and feature names, e.g. "ICache".
std::string_view component_name(ComponentId c);
std::optional<ComponentId> parse_component(std::string_view name);
CpuPart cpu_part(ComponentId c);
std::string_view cpu_part_name(CpuPart part);

// Fixed-size table keyed by ComponentId.
template <typename T>
struct PerComponent {
  std::array<T, kNumComponents> values{};

  T& operator[](ComponentId c) { return values[index_of(c)]; }
  const T& operator[](ComponentId c) const { return values[index_of(c)]; }

  auto begin() { return values.begin(); }
  auto end() { return values.end(); }
  auto begin() const { return values.begin(); }
  auto end() const { return values.end(); }

  bool operator==(const PerComponent&) const = default;
};

}  // namespace panda
