#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "gupmarket/error.hpp"
#include "gupmarket/io.hpp"

namespace gupmarket {

// Reference figures quoted for the Chinese market, kept for comparison in
// calibration summaries.
inline constexpr double kQuotedOmegaPrefactorPerSecond = 4e-3;  // omega_n^0 ~ 4e-3 (n^2 - 1) s^-1
inline constexpr double kQuotedCycleThresholdMinutes = 25.0;

struct CommandOutput {
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};

// Each command writes its tables and `<command>_summary.json` into
// config.out_dir and returns the summary.
CommandOutput cmd_spectrum(const RunConfig& config);
CommandOutput cmd_scan(const RunConfig& config);
CommandOutput cmd_propagate(const RunConfig& config);
CommandOutput cmd_calibrate(const RunConfig& config);

// Process exit code for an error category: 2 usage/config, 3 domain,
// 4 numerical failure.
int exit_code_for(ErrorCategory category);

}  // namespace gupmarket
