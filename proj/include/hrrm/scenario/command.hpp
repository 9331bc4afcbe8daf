#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hrrm::scenario {

/// Environment variable selecting diagnostic verbosity: error, warn, info or debug.
inline constexpr const char* kLogLevelVariable = "HRRM_LOG_LEVEL";

enum class LogLevel { error, warn, info, debug };

/// Level named by `text`; warn for null or unrecognised text.
LogLevel parse_log_level(const char* text);

/// Parses "A..B" (inclusive, A <= B).
std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_seed_range(std::string_view text);

/// Command-line entry point without the program name:
///   run <file> [--seed N | --seeds A..B] [--out DIR]
///   validate <file>
/// Returns 0 on success, 1 when the scenario or run fails, 2 on a usage error.
/// Diagnostics go to `err` as a single line.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hrrm::scenario
