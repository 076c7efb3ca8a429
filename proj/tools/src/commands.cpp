#include "spdc_cli/commands.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "spdc/analysis.hpp"
#include "spdc/atomic_file.hpp"
#include "spdc/coincidence.hpp"
#include "spdc/direct.hpp"
#include "spdc/entanglement.hpp"
#include "spdc/errors.hpp"

namespace spdc::cli {
namespace {

constexpr const char* kModule = "cli";
constexpr double kDeg = 180.0 / std::numbers::pi;

std::filesystem::path prepare_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoError(kModule, "cannot create output directory " + config.output_dir.string());
  return config.output_dir;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_atomically(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

nlohmann::json entropy_json(const EntropyTerms& t) {
  return {{"H_pos_joint", t.pos_joint},         {"H_pos_idler", t.pos_idler},
          {"H_pos_conditional", t.pos_conditional}, {"H_mom_joint", t.mom_joint},
          {"H_mom_idler", t.mom_idler},         {"H_mom_conditional", t.mom_conditional}};
}

nlohmann::json report_json(const EfReport& r) {
  nlohmann::json j = entropy_json(r.h);
  j["M"] = r.m;
  j["ef_min"] = r.ef_min;
  j["x"] = entropy_json(r.x);
  if (r.y) j["y"] = entropy_json(*r.y);
  j["fingerprint"] = r.fingerprint;
  return j;
}

TwoPhotonSource make_source(const RunConfig& config) {
  return TwoPhotonSource(config.model(), config.pump(), config.setup());
}

Distribution simulate_pdf(const RunConfig& config, Basis basis) {
  const auto source = make_source(config);
  const auto grid = auto_grid(config.grid_n, source, config.extent);
  const auto options = config.field_options();
  const auto amp = build_amplitude(grid, source, options);
  if (basis == Basis::momentum) return momentum_pdf(amp);
  return position_pdf(to_position(propagate(amp, config.z), options));
}

CommandResult collinear(const RunConfig& config, std::ostream& log) {
  const double theta = collinear_angle(config.model(), config.lambda_p, config.lambda_s);
  const auto dir = prepare_dir(config);
  const auto fp = config.fingerprint({{"name", "collinear-angle"}});
  log << std::setprecision(8) << "collinear theta_p = " << theta * kDeg << " deg (" << theta
      << " rad)\n";
  const auto path = dir / "collinear_angle.json";
  write_json(path, {{"theta_p_rad", theta},
                    {"theta_p_deg", theta * kDeg},
                    {"lambda_p", config.lambda_p},
                    {"lambda_s", config.lambda_s},
                    {"fingerprint", fp}});
  return {{path}};
}

CommandResult phasematch_map(const RunConfig& config, const CommandArgs& args, std::ostream& log) {
  const std::string slice = args.mode.empty() ? "signal" : args.mode;
  if (slice != "signal" && slice != "x") {
    throw ConfigError(kModule, "phasematch-map slice must be 'signal' or 'x'");
  }
  const auto source = make_source(config);
  const auto grid = auto_grid(config.direct_n, source, config.extent);
  const auto n = static_cast<std::size_t>(grid.n());
  const auto fp = config.fingerprint({{"name", "phasematch-map"}, {"slice", slice}});
  GridData dk{{n, n}, {}, std::vector<double>(n * n), fp};
  GridData phi{{n, n}, {}, std::vector<double>(n * n), fp};
  if (slice == "signal") {
    dk.axes = {{"q_xs", grid.dq(), "rad/m"}, {"q_ys", grid.dq(), "rad/m"}};
  } else {
    dk.axes = {{"q_xs", grid.dq(), "rad/m"}, {"q_xi", grid.dq(), "rad/m"}};
  }
  phi.axes = dk.axes;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double a = grid.q(static_cast<int>(r));
      const double b = grid.q(static_cast<int>(c));
      // signal slice: q_s = (a, b), q_i = -q_s (pump on axis); x slice: q_s = (a, 0), q_i = (b, 0)
      const TransverseMomentum qs = slice == "signal" ? TransverseMomentum{a, b} : TransverseMomentum{a, 0.0};
      const TransverseMomentum qi = slice == "signal" ? -qs : TransverseMomentum{b, 0.0};
      dk.values[r * n + c] = source.delta_kz(qs, qi);
      phi.values[r * n + c] = std::abs(source.phi(qs, qi));
    }
  prepare_dir(config);
  CommandResult result;
  for (auto& p : write_outputs(dk, config, "phasematch_dk")) result.files.push_back(p);
  for (auto& p : write_outputs(phi, config, "phasematch_phi")) result.files.push_back(p);
  log << "phase-matching slice '" << slice << "' on " << n << " x " << n << " nodes, dq = "
      << grid.dq() << " rad/m\n";
  return result;
}

CommandResult simulate(const RunConfig& config, const CommandArgs& args, std::ostream& log) {
  if (args.mode != "pos" && args.mode != "mom") {
    throw ConfigError(kModule, "simulate needs 'pos' or 'mom'");
  }
  const Basis basis = args.mode == "pos" ? Basis::position : Basis::momentum;
  const auto pdf = simulate_pdf(config, basis);
  const auto fp = config.fingerprint({{"name", "simulate"}, {"mode", args.mode}});
  prepare_dir(config);
  CommandResult result;
  auto emit = [&](const Distribution& d, const std::string& stem) {
    for (auto& p : write_outputs(grid_from(d, fp), config, stem)) result.files.push_back(p);
  };
  const auto jx = averaged_joint_x(pdf);
  const auto cond = conditional_position(pdf, {0.0, 0.0});
  emit(jx, args.mode + "_joint_x");
  emit(averaged_joint_y(pdf), args.mode + "_joint_y");
  emit(cond, args.mode + "_conditional");
  emit(singles(pdf), args.mode + "_singles");
  if (args.full) emit(pdf, args.mode + "_4d");
  const auto profile = radial_profile(cond);
  log << std::setprecision(6) << args.mode << ": N = " << config.grid_n
      << ", joint correlation = " << pearson_correlation(jx)
      << ", conditional radial peak at r = " << argmax(profile) << " px ("
      << argmax(profile) * cond.axes()[0].bin_width << ' ' << cond.axes()[0].unit << ")\n";
  return result;
}

CommandResult conditional(const RunConfig& config, const CommandArgs& args, std::ostream& log) {
  const auto source = make_source(config);
  const auto grid = auto_grid(config.direct_n, source, config.extent);
  const auto cond = conditional_position_direct(grid, source, config.z, args.rho_i0);
  const auto fp = config.fingerprint(
      {{"name", "conditional"}, {"rho_i0", {args.rho_i0.x, args.rho_i0.y}}});
  const auto dir = prepare_dir(config);
  CommandResult result{write_outputs(grid_from(cond, fp), config, "conditional")};
  const auto profile = radial_profile(cond);
  const auto radial_path = dir / "conditional_radial.csv";
  write_atomically(radial_path, [&](std::ostream& out) {
    out << std::setprecision(17) << "# fingerprint " << fp << "\nr_px,r_m,value\n";
    for (std::size_t r = 0; r < profile.size(); ++r) {
      out << r << ',' << r * grid.dx() << ',' << profile[r] << '\n';
    }
  });
  result.files.push_back(radial_path);
  log << std::setprecision(6) << "conditional at z = " << config.z * 1e3 << " mm on " << grid.n()
      << "^2 nodes (dx = " << grid.dx() * 1e6 << " um): radial peak at r = " << argmax(profile)
      << " px, " << count_local_maxima(profile) << " radial local maxima\n";
  return result;
}

CommandResult singles_cmd(const RunConfig& config, std::ostream& log) {
  const auto pdf = simulate_pdf(config, Basis::position);
  const auto fp = config.fingerprint({{"name", "singles"}});
  prepare_dir(config);
  const auto s = singles(pdf);
  CommandResult result{write_outputs(grid_from(s, fp), config, "singles")};
  log << "singles at z = " << config.z * 1e3 << " mm, radial peak at r = "
      << argmax(radial_profile(s)) << " px\n";
  return result;
}

CommandResult ef(const RunConfig& config, std::ostream& log) {
  auto report = evaluate_ef(config.entanglement_config(), config.z);
  report.fingerprint = config.fingerprint({{"name", "ef"}});
  const auto dir = prepare_dir(config);
  const auto path = dir / "ef.json";
  auto doc = report_json(report);
  doc["z"] = config.z;
  write_json(path, doc);
  log << std::setprecision(6) << "E_f^min = " << report.ef_min << " ebits (M = " << report.m
      << ", H(X_s|X_i) = " << report.h.pos_conditional
      << ", H(K_s|K_i) = " << report.h.mom_conditional << ")\n";
  return {{path}};
}

CommandResult scan_cmd(const RunConfig& config, const CommandArgs& args, std::ostream& log) {
  ScanParameter parameter;
  Dimension dimension;
  double display;
  std::string unit;
  if (args.mode == "z") {
    parameter = ScanParameter::z, dimension = Dimension::length, display = 1e3, unit = "mm";
  } else if (args.mode == "theta") {
    parameter = ScanParameter::theta_p, dimension = Dimension::angle, display = kDeg, unit = "deg";
  } else if (args.mode == "d") {
    parameter = ScanParameter::gap, dimension = Dimension::length, display = 1e3, unit = "mm";
  } else {
    throw ConfigError(kModule, "scan parameter must be z, theta or d");
  }
  const auto raw = args.values.empty() ? default_scan_values(args.mode) : args.values;
  std::vector<double> values;
  for (const auto& v : raw) values.push_back(parse_quantity(v, dimension, "scan." + args.mode));

  const auto points = scan(config.entanglement_config(), config.z, parameter, values);
  const auto fp = config.fingerprint({{"name", "scan"}, {"parameter", args.mode}, {"values", values}});
  const auto dir = prepare_dir(config);
  const auto path = dir / ("scan_" + args.mode + ".csv");
  write_atomically(path, [&](std::ostream& out) {
    out << std::setprecision(17) << "# fingerprint " << fp << '\n'
        << "value,unit,ef_min,H_pos_conditional,H_mom_conditional,M,error\n";
    for (const auto& p : points) {
      out << p.value * display << ',' << unit << ',';
      if (p.report) {
        out << p.report->ef_min << ',' << p.report->h.pos_conditional << ','
            << p.report->h.mom_conditional << ',' << p.report->m << ",\n";
      } else {
        std::string err = p.error;
        for (auto& ch : err) if (ch == '"') ch = '\'';
        out << ",,,,\"" << err << "\"\n";
      }
    }
  });
  log << std::setprecision(6);
  for (const auto& p : points) {
    log << args.mode << " = " << p.value * display << ' ' << unit << ": ";
    if (p.report) log << "E_f^min = " << p.report->ef_min << " ebits\n";
    else log << "failed: " << p.error << '\n';
  }
  return {{path}};
}

CommandResult frames_cmd(const RunConfig& config, const CommandArgs& args, std::ostream& log) {
  const auto dir = prepare_dir(config);
  if (args.mode == "synth") {
    const auto pdf = simulate_pdf(config, Basis::position);
    SynthOptions options;
    options.mu_pairs = config.mu_pairs;
    options.frames = config.frames;
    options.seed = config.seed;
    options.fingerprint = config.fingerprint({{"name", "frames synth"}});
    const auto stack = synth_frames(pdf, config.detector, options);
    const auto path = args.input.value_or(dir / "frames.bin");
    write_frames(stack, config.detector, config.mu_pairs, path);

    const auto& d = config.detector;
    const auto w = static_cast<std::size_t>(d.roi_width);
    GridData joint{{w, w},
                   {{"x_s", d.pixel_pitch, "m"}, {"x_i", d.pixel_pitch, "m"}},
                   project_joint_to_pixels(averaged_joint_x(pdf), d),
                   options.fingerprint};
    CommandResult result{{path}};
    for (auto& p : write_outputs(joint, config, "frames_generating_joint")) result.files.push_back(p);
    std::uint64_t total = 0;
    for (auto c : stack.counts()) total += c;
    log << "wrote " << stack.frames() << " frames of " << stack.width() << " x "
        << stack.height() << " pixels (" << total << " counts) to " << path.string() << '\n';
    return result;
  }
  if (args.mode == "coincide") {
    const auto path = args.input.value_or(dir / "frames.bin");
    const auto stack = read_frames(path);
    Reduction reduction = XPairs{};
    nlohmann::json reduction_json = "x-pairs";
    if (args.pixel) {
      reduction = ConditionalRow{args.pixel->first, args.pixel->second};
      reduction_json = {args.pixel->first, args.pixel->second};
    }
    const auto map = coincidence_map(stack, reduction);
    const auto fp = config.fingerprint({{"name", "frames coincide"},
                                        {"stack", stack.fingerprint()},
                                        {"seed", stack.seed()},
                                        {"reduction", reduction_json}});
    const double pitch = config.detector.pixel_pitch;
    std::vector<GridAxis> axes;
    if (args.pixel) axes = {{"y", pitch, "m"}, {"x", pitch, "m"}};
    else axes = {{"x_p", pitch, "m"}, {"x_q", pitch, "m"}};
    GridData values{{map.rows, map.cols}, axes, map.values, fp};
    GridData errors{{map.rows, map.cols}, axes, map.std_error, fp};
    CommandResult result{write_outputs(values, config, "coincidence")};
    for (auto& p : write_outputs(errors, config, "coincidence_stderr")) result.files.push_back(p);
    log << "coincidence map " << map.rows << " x " << map.cols << " from " << map.frames
        << " frames\n";
    return result;
  }
  throw ConfigError(kModule, "frames needs 'synth' or 'coincide'");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"collinear-angle", "phasematch-map", "simulate",
                                                 "conditional", "singles", "ef", "scan", "frames"};
  return names;
}

std::vector<std::string> default_scan_values(const std::string& parameter) {
  if (parameter == "z") {
    return {"0mm", "5mm", "10mm", "15mm", "20mm", "25mm", "30mm", "35mm", "40mm"};
  }
  if (parameter == "theta") return {"32.90deg", "32.92deg", "32.94deg", "32.96deg", "32.98deg"};
  if (parameter == "d") return {"2mm", "4mm", "6mm"};
  throw ConfigError(kModule, "scan parameter must be z, theta or d");
}

std::vector<std::filesystem::path> write_outputs(const GridData& grid, const RunConfig& config,
                                                 const std::string& stem) {
  std::vector<std::filesystem::path> out;
  const auto dir = config.output_dir;
  for (auto f : config.formats) {
    if (f == OutputFormat::grd) {
      out.push_back(dir / (stem + ".grd"));
      write_grd(grid, out.back());
    } else if (grid.shape.size() == 2 && f == OutputFormat::csv) {
      out.push_back(dir / (stem + ".csv"));
      write_csv(grid, out.back());
    } else if (grid.shape.size() == 2 && f == OutputFormat::pgm) {
      out.push_back(dir / (stem + ".pgm"));
      write_pgm(grid, out.back());
    }
  }
  return out;
}

CommandResult run_command(const std::string& name, const RunConfig& config, const CommandArgs& args,
                          std::ostream& log) {
  if (name == "collinear-angle") return collinear(config, log);
  if (name == "phasematch-map") return phasematch_map(config, args, log);
  if (name == "simulate") return simulate(config, args, log);
  if (name == "conditional") return conditional(config, args, log);
  if (name == "singles") return singles_cmd(config, log);
  if (name == "ef") return ef(config, log);
  if (name == "scan") return scan_cmd(config, args, log);
  if (name == "frames") return frames_cmd(config, args, log);
  throw ConfigError(kModule, "unknown command '" + name + "'");
}

}  // namespace spdc::cli
