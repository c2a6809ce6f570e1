#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "kvlab/config.hpp"

namespace kvlab {

struct CommandResult {
  int exit_code = 0;
  std::vector<std::string> files;
  nlohmann::json summary;  // empty unless the command writes one
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"profile-resolvent", "decay", "check-greens",
                                                 "weyl", "spectrum", "check-range"};
  return names;
}

/// Validates, runs and writes <output>, <output>.manifest.json and, for
/// decay and check-range, <output>.summary.json. Diagnostics go to `log`.
CommandResult run_command(const RunConfig& config, std::ostream& log);

/// 17 significant digits, scientific.
std::string format_real(double x);

}  // namespace kvlab
