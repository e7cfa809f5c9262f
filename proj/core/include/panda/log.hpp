#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace panda {

using WarningSink = std::function<void(std::string_view)>;

// Reports a recoverable condition (fallback bias, degenerate fit, ...).
// Thread-safe. The default sink writes "warning: <msg>" to stderr.
void warn(std::string_view message);

// Installs a new sink and returns the previous one. An empty sink silences
// warnings.
WarningSink set_warning_sink(WarningSink sink);

// RAII helper that collects warnings for the lifetime of the object.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view needle) const;

 private:
  std::vector<std::string> messages_;
  WarningSink previous_;
};

}  // namespace panda
