#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "panda/dataset.hpp"
#include "panda/regressor.hpp"
#include "panda/synth.hpp"

namespace panda::test {

// Synthetic C1..C15 data with the first `workloads` profiles.
Dataset small_synth(std::uint64_t seed = 3, std::size_t workloads = 3, bool include_special = false);

// Fewer, shallower trees for fast unit tests.
TrainOptions fast_options();

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace panda::test
