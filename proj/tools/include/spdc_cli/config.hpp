#pragma once

// Run configuration: built-in defaults, JSON config files and command-line
// overrides (flags win over the file). Quantities may carry units
// (nm, um/µm, mm, m, deg, rad); bare numbers are SI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdc/coincidence.hpp"
#include "spdc/entanglement.hpp"
#include "spdc/fields.hpp"
#include "spdc/phasematch.hpp"

namespace spdc::cli {

enum class Dimension { length, angle, none };

/// "355nm" -> 3.55e-7, "32.9deg" -> 0.5742..., "5" -> 5. Throws ConfigError
/// naming `key` on unknown units or a unit of the wrong dimension.
double parse_quantity(const std::string& text, Dimension dimension, const std::string& key);

enum class OutputFormat { grd, csv, pgm };

struct RunConfig {
  std::filesystem::path sellmeier;  // empty: embedded BBO set
  double lambda_p = 355e-9;
  double lambda_s = 710e-9;
  double waist = 507e-6;
  bool double_crystal = false;
  double length = 5e-3;
  double gap = 0.0;
  double theta_p = 0.0;
  double z = 5e-3;
  int grid_n = 64;
  int direct_n = 256;
  ExtentPolicy extent;
  double truncation_tolerance = 5e-3;
  std::size_t memory_budget_mb = 2048;
  EntanglementGridPolicy entanglement;
  ExtentPolicy entanglement_extent{6.0, 2.0};
  DetectorModel detector;
  double mu_pairs = 1.0;
  std::size_t frames = 100000;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "spdc_out";
  std::vector<OutputFormat> formats = {OutputFormat::grd, OutputFormat::csv, OutputFormat::pgm};

  /// Canonical JSON of every physics and sampling parameter (SI units).
  nlohmann::json physics_json() const;
  /// SHA-256 (hex) of the canonical physics JSON together with `command`,
  /// which names the command and its arguments.
  std::string fingerprint(const nlohmann::json& command = nullptr) const;

  SellmeierModel model() const;
  PumpSpec pump() const;
  CrystalSetup setup() const;
  FieldOptions field_options() const;
  EntanglementConfig entanglement_config() const;
};

/// Raw override values keyed by dotted path ("crystal.theta_p"), as given on
/// the command line.
using Overrides = std::map<std::string, std::string>;

/// Builds a config from defaults, an optional JSON file and overrides, then
/// validates it. Throws ConfigError with the offending key path.
RunConfig parse_config(const std::optional<std::filesystem::path>& file, const Overrides& overrides,
                       const char* output_dir_env = "SPDC_OUTPUT_DIR");

/// Same, from an in-memory JSON document.
RunConfig parse_config_json(const nlohmann::json& doc, const Overrides& overrides,
                            const char* output_dir_env = "SPDC_OUTPUT_DIR");

/// The accepted JSON schema keys, for documentation and error messages.
const std::vector<std::string>& config_keys();

}  // namespace spdc::cli
