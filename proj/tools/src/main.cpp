// spdc: command-line front end.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc_cli/commands.hpp"
#include "spdc_cli/config.hpp"

namespace {

std::pair<double, double> parse_point(const std::string& text, const std::string& key) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw spdc::ConfigError("cli", key + ": expected 'x,y'");
  }
  using spdc::cli::Dimension;
  return {spdc::cli::parse_quantity(text.substr(0, comma), Dimension::length, key),
          spdc::cli::parse_quantity(text.substr(comma + 1), Dimension::length, key)};
}

std::pair<int, int> parse_pixel(const std::string& text) {
  int r = 0, c = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> r >> comma >> c) || comma != ',' || !in.eof()) {
    throw spdc::ConfigError("cli", "--pixel: expected 'row,col'");
  }
  return {r, c};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured two-photon fields from type-I SPDC: simulation, entanglement bounds "
               "and synthetic coincidence imaging"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);

  // Flag -> config key. Values keep their units; parsing happens in one place.
  spdc::cli::Overrides overrides;
  const std::pair<const char*, const char*> keyed[] = {
      {"--lambda-p", "pump.wavelength"},          {"--lambda-s", "pump.signal_wavelength"},
      {"--w0", "pump.waist"},                     {"--L", "crystal.length"},
      {"--d", "crystal.gap"},                     {"--theta-p", "crystal.theta_p"},
      {"--z", "z"},                               {"--N", "grid.n"},
      {"--direct-N", "grid.direct_n"},            {"--c1", "grid.pump_factor"},
      {"--c2", "grid.phase_matching_factor"},     {"--memory-mb", "grid.memory_budget_mb"},
      {"--M", "entanglement.points"},             {"--binning", "entanglement.binning"},
      {"--pitch", "coincidence.pixel_pitch"},     {"--qe", "coincidence.quantum_efficiency"},
      {"--dark", "coincidence.dark_rate"},        {"--roi-width", "coincidence.roi_width"},
      {"--roi-height", "coincidence.roi_height"}, {"--mu", "coincidence.mu_pairs"},
      {"--frames", "coincidence.frames"},         {"--seed", "coincidence.seed"},
      {"--sellmeier", "sellmeier"},               {"--output-dir", "output.directory"},
      {"--format", "output.formats"},             {"--ef-c2", "entanglement.phase_matching_factor"},
  };
  std::map<std::string, std::string> flag_values;
  for (const auto& [flag, key] : keyed) {
    app.add_option(flag, flag_values[key], std::string("sets ") + key);
  }
  bool double_crystal = false;
  app.add_flag("--double", double_crystal, "two-crystal setup (defaults L = 1 mm, d = 2 mm)");

  spdc::cli::CommandArgs args;
  std::string rho, pixel, frames_file;

  auto* collinear = app.add_subcommand("collinear-angle", "collinear phase-matching angle");
  auto* pm = app.add_subcommand("phasematch-map", "Delta k_z and |Phi| over a 2D momentum slice");
  pm->add_option("slice", args.mode, "signal (q_s, with q_i = -q_s) or x (q_xs, q_xi)")
      ->check(CLI::IsMember({"signal", "x"}));
  auto* sim = app.add_subcommand("simulate", "4D pipeline: joint, conditional and singles outputs");
  sim->add_option("basis", args.mode, "pos or mom")->required()->check(CLI::IsMember({"pos", "mom"}));
  sim->add_flag("--full", args.full, "also write the 4D array (GRD1)");
  auto* cond = app.add_subcommand("conditional", "conditional signal image at z (direct route)");
  cond->add_option("--rho-i", rho, "idler position 'x,y' (units allowed)");
  auto* sgl = app.add_subcommand("singles", "one-photon image at z");
  auto* efc = app.add_subcommand("ef", "entropic entanglement-of-formation bound at z");
  auto* scn = app.add_subcommand("scan", "E_f^min over z, theta_p or d");
  scn->add_option("parameter", args.mode, "z, theta or d")->required()->check(CLI::IsMember({"z", "theta", "d"}));
  scn->add_option("--values", args.values, "values with units")->delimiter(',');
  auto* frm = app.add_subcommand("frames", "synthetic camera frames and coincidence maps");
  frm->add_option("action", args.mode, "synth or coincide")->required()->check(CLI::IsMember({"synth", "coincide"}));
  frm->add_option("--file", frames_file, "frame-stack path (default <output-dir>/frames.bin)");
  frm->add_option("--pixel", pixel, "conditional row at idler pixel 'row,col' (coincide)");
  (void)collinear, (void)sgl, (void)efc;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(spdc::ErrorCategory::config);
  }

  try {
    for (const auto& [flag, key] : keyed) {
      if (app.count(flag) > 0) overrides[key] = flag_values[key];
    }
    if (double_crystal) overrides["crystal.kind"] = "double";
    if (!rho.empty()) {
      const auto [x, y] = parse_point(rho, "--rho-i");
      args.rho_i0 = {x, y};
    }
    if (!pixel.empty()) args.pixel = parse_pixel(pixel);
    if (!frames_file.empty()) args.input = frames_file;

    std::optional<std::filesystem::path> file;
    if (!config_file.empty()) file = config_file;
    const auto config = spdc::cli::parse_config(file, overrides);
    const std::string name = app.get_subcommands().front()->get_name();
    const auto result = spdc::cli::run_command(name, config, args, std::cout);
    for (const auto& f : result.files) std::cout << "  " << f.string() << '\n';
    return 0;
  } catch (const spdc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
