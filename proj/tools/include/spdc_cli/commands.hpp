#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "spdc_cli/config.hpp"
#include "spdc_cli/grid_io.hpp"

namespace spdc::cli {

/// Command-specific arguments (everything that is not part of RunConfig).
struct CommandArgs {
  std::string mode;                          // pos|mom, z|theta|d, synth|coincide, signal|x
  std::vector<std::string> values;           // scan values, with units
  TransversePoint rho_i0;                    // conditioning point, meters
  bool full = false;                         // also write the 4D array
  std::optional<std::filesystem::path> input;
  std::optional<std::pair<int, int>> pixel;  // (row, col) for a conditional coincidence row
};

struct CommandResult {
  std::vector<std::filesystem::path> files;
};

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Runs one command, writing files under config.output_dir and a short
/// human-readable summary to `log`. Errors propagate as spdc::Error.
CommandResult run_command(const std::string& name, const RunConfig& config, const CommandArgs& args,
                          std::ostream& log);

/// Writes `grid` as <dir>/<stem>.<ext> for each requested format (4D arrays
/// only as GRD1).
std::vector<std::filesystem::path> write_outputs(const GridData& grid, const RunConfig& config,
                                                 const std::string& stem);

/// Default scan values for z (mm), theta_p (deg) and d (mm).
std::vector<std::string> default_scan_values(const std::string& parameter);

}  // namespace spdc::cli
