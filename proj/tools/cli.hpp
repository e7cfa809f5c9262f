#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace panda::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitModel = 4;

// Runs the tool; args excludes the program name. Errors are reported on `err`
// as a single line "panda: <usage|data|model> error: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace panda::cli
