#include "spdc_cli/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc::cli {
namespace {

constexpr const char* kModule = "cli";

struct Unit {
  const char* name;
  Dimension dimension;
  double scale;
};

constexpr Unit kUnits[] = {
    {"nm", Dimension::length, 1e-9}, {"um", Dimension::length, 1e-6},
    {"\xC2\xB5m", Dimension::length, 1e-6}, {"mm", Dimension::length, 1e-3},
    {"m", Dimension::length, 1.0},   {"deg", Dimension::angle, std::numbers::pi / 180.0},
    {"rad", Dimension::angle, 1.0},
};

const char* dimension_name(Dimension d) {
  switch (d) {
    case Dimension::length:
      return "a length (nm, um, mm, m)";
    case Dimension::angle:
      return "an angle (deg, rad)";
    default:
      return "a plain number";
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// A setting before type conversion: a JSON scalar from the file or a string
// from the command line.
using Raw = nlohmann::json;

void flatten(const nlohmann::json& node, const std::string& prefix, std::map<std::string, Raw>& out) {
  if (node.is_object()) {
    for (const auto& [k, v] : node.items()) {
      flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    }
    return;
  }
  out[prefix] = node;
}

double as_quantity(const Raw& raw, Dimension d, const std::string& key) {
  if (raw.is_number()) return raw.get<double>();
  if (raw.is_string()) return parse_quantity(raw.get<std::string>(), d, key);
  throw ConfigError(kModule, key + ": expected " + std::string(dimension_name(d)));
}

long long as_integer(const Raw& raw, const std::string& key) {
  if (raw.is_number_integer()) return raw.get<long long>();
  if (raw.is_string()) {
    const auto text = trim(raw.get<std::string>());
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc{} && ptr == text.data() + text.size() && !text.empty()) return v;
  }
  if (raw.is_number_float()) {
    const double d = raw.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
  }
  throw ConfigError(kModule, key + ": expected an integer");
}

std::uint64_t as_unsigned(const Raw& raw, const std::string& key) {
  if (raw.is_number_unsigned()) return raw.get<std::uint64_t>();
  if (raw.is_string()) {
    const auto text = trim(raw.get<std::string>());
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc{} && ptr == text.data() + text.size() && !text.empty()) return v;
  }
  const long long v = as_integer(raw, key);
  if (v < 0) throw ConfigError(kModule, key + ": must be non-negative");
  return static_cast<std::uint64_t>(v);
}

std::string as_string(const Raw& raw, const std::string& key) {
  if (!raw.is_string()) throw ConfigError(kModule, key + ": expected a string");
  return raw.get<std::string>();
}

std::vector<OutputFormat> as_formats(const Raw& raw, const std::string& key) {
  std::vector<std::string> names;
  if (raw.is_array()) {
    for (const auto& v : raw) names.push_back(as_string(v, key));
  } else {
    std::stringstream ss(as_string(raw, key));
    std::string item;
    while (std::getline(ss, item, ',')) names.push_back(trim(item));
  }
  std::vector<OutputFormat> out;
  for (const auto& n : names) {
    if (n == "grd") out.push_back(OutputFormat::grd);
    else if (n == "csv") out.push_back(OutputFormat::csv);
    else if (n == "pgm") out.push_back(OutputFormat::pgm);
    else throw ConfigError(kModule, key + ": unknown format '" + n + "' (grd, csv, pgm)");
  }
  if (out.empty()) throw ConfigError(kModule, key + ": at least one format is required");
  return out;
}

int to_int(long long v, const std::string& key) {
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(kModule, key + ": out of range");
  return static_cast<int>(v);
}

template <class F>
void wrap(const std::string& key, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    throw ConfigError(kModule, key + ": " + e.what());
  }
}

}  // namespace

double parse_quantity(const std::string& text, Dimension dimension, const std::string& key) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || s.empty()) {
    throw ConfigError(kModule, key + ": cannot read a number from '" + text + "'");
  }
  const std::string unit = trim(std::string(ptr, s.data() + s.size()));
  if (unit.empty()) return value;
  for (const auto& u : kUnits) {
    if (unit == u.name) {
      if (u.dimension != dimension) {
        throw ConfigError(kModule, key + ": unit '" + unit + "' does not match; expected " +
                                       dimension_name(dimension));
      }
      return value * u.scale;
    }
  }
  throw ConfigError(kModule, key + ": unknown unit '" + unit + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "sellmeier",
      "pump.wavelength", "pump.signal_wavelength", "pump.waist",
      "crystal.kind", "crystal.length", "crystal.gap", "crystal.theta_p",
      "z",
      "grid.n", "grid.direct_n", "grid.pump_factor", "grid.phase_matching_factor",
      "grid.truncation_tolerance", "grid.memory_budget_mb",
      "entanglement.points", "entanglement.min_points", "entanglement.max_points",
      "entanglement.max_dq_w0", "entanglement.binning", "entanglement.pump_factor",
      "entanglement.phase_matching_factor",
      "coincidence.pixel_pitch", "coincidence.quantum_efficiency", "coincidence.dark_rate",
      "coincidence.roi_width", "coincidence.roi_height", "coincidence.mu_pairs",
      "coincidence.frames", "coincidence.seed",
      "output.directory", "output.formats",
  };
  return keys;
}

RunConfig parse_config_json(const nlohmann::json& doc, const Overrides& overrides,
                            const char* output_dir_env) {
  if (!doc.is_null() && !doc.is_object()) throw ConfigError(kModule, "config root must be an object");
  std::map<std::string, Raw> settings;
  if (doc.is_object()) flatten(doc, "", settings);
  for (const auto& [k, v] : overrides) settings[k] = v;

  const auto& known = config_keys();
  for (const auto& [k, v] : settings) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError(kModule, "unknown key '" + k + "'");
    }
  }
  auto has = [&](const std::string& k) { return settings.count(k) != 0; };
  auto get = [&](const std::string& k) -> const Raw& { return settings.at(k); };

  RunConfig c;
  if (has("crystal.kind")) {
    const auto kind = as_string(get("crystal.kind"), "crystal.kind");
    if (kind == "double") c.double_crystal = true;
    else if (kind != "single") {
      throw ConfigError(kModule, "crystal.kind: expected 'single' or 'double', got '" + kind + "'");
    }
  }
  // Default configurations: 5 mm crystal at 32.9 deg imaged at 5 mm, or two
  // 1 mm crystals 2 mm apart at 32.93 deg imaged at 7.5 mm.
  if (c.double_crystal) {
    c.length = 1e-3;
    c.gap = 2e-3;
    c.theta_p = 32.93 * std::numbers::pi / 180.0;
    c.z = 7.5e-3;
  } else {
    c.theta_p = 32.9 * std::numbers::pi / 180.0;
    if (has("crystal.gap")) {
      throw ConfigError(kModule, "crystal.gap: a gap needs a double-crystal setup (crystal.kind = "
                                 "double, --double)");
    }
  }

  for (const auto& [key, raw] : settings) {
    if (key == "sellmeier") c.sellmeier = as_string(raw, key);
    else if (key == "pump.wavelength") c.lambda_p = as_quantity(raw, Dimension::length, key);
    else if (key == "pump.signal_wavelength") c.lambda_s = as_quantity(raw, Dimension::length, key);
    else if (key == "pump.waist") c.waist = as_quantity(raw, Dimension::length, key);
    else if (key == "crystal.length") c.length = as_quantity(raw, Dimension::length, key);
    else if (key == "crystal.gap") c.gap = as_quantity(raw, Dimension::length, key);
    else if (key == "crystal.theta_p") c.theta_p = as_quantity(raw, Dimension::angle, key);
    else if (key == "z") c.z = as_quantity(raw, Dimension::length, key);
    else if (key == "grid.n") c.grid_n = to_int(as_integer(raw, key), key);
    else if (key == "grid.direct_n") c.direct_n = to_int(as_integer(raw, key), key);
    else if (key == "grid.pump_factor") c.extent.pump_factor = as_quantity(raw, Dimension::none, key);
    else if (key == "grid.phase_matching_factor")
      c.extent.phase_matching_factor = as_quantity(raw, Dimension::none, key);
    else if (key == "grid.truncation_tolerance")
      c.truncation_tolerance = as_quantity(raw, Dimension::none, key);
    else if (key == "grid.memory_budget_mb") {
      const long long mb = as_integer(raw, key);
      if (mb <= 0) throw ConfigError(kModule, key + ": must be positive");
      c.memory_budget_mb = static_cast<std::size_t>(mb);
    } else if (key == "entanglement.points") c.entanglement.points = to_int(as_integer(raw, key), key);
    else if (key == "entanglement.min_points")
      c.entanglement.min_points = to_int(as_integer(raw, key), key);
    else if (key == "entanglement.max_points")
      c.entanglement.max_points = to_int(as_integer(raw, key), key);
    else if (key == "entanglement.max_dq_w0")
      c.entanglement.max_dq_w0 = as_quantity(raw, Dimension::none, key);
    else if (key == "entanglement.binning") c.entanglement.binning = to_int(as_integer(raw, key), key);
    else if (key == "entanglement.pump_factor")
      c.entanglement_extent.pump_factor = as_quantity(raw, Dimension::none, key);
    else if (key == "entanglement.phase_matching_factor")
      c.entanglement_extent.phase_matching_factor = as_quantity(raw, Dimension::none, key);
    else if (key == "coincidence.pixel_pitch")
      c.detector.pixel_pitch = as_quantity(raw, Dimension::length, key);
    else if (key == "coincidence.quantum_efficiency")
      c.detector.quantum_efficiency = as_quantity(raw, Dimension::none, key);
    else if (key == "coincidence.dark_rate") c.detector.dark_rate = as_quantity(raw, Dimension::none, key);
    else if (key == "coincidence.roi_width") c.detector.roi_width = to_int(as_integer(raw, key), key);
    else if (key == "coincidence.roi_height") c.detector.roi_height = to_int(as_integer(raw, key), key);
    else if (key == "coincidence.mu_pairs") c.mu_pairs = as_quantity(raw, Dimension::none, key);
    else if (key == "coincidence.frames") {
      const long long f = as_integer(raw, key);
      if (f < 1) throw ConfigError(kModule, key + ": at least one frame is required");
      c.frames = static_cast<std::size_t>(f);
    } else if (key == "coincidence.seed") c.seed = as_unsigned(raw, key);
    else if (key == "output.directory") c.output_dir = as_string(raw, key);
    else if (key == "output.formats") c.formats = as_formats(raw, key);
  }
  if (!has("output.directory") && output_dir_env) {
    if (const char* env = std::getenv(output_dir_env); env && *env) c.output_dir = env;
  }

  // Invariants, reported against their key paths.
  wrap("pump.signal_wavelength", [&] { require_degenerate(c.lambda_p, c.lambda_s); });
  wrap("pump", [&] { c.pump().validate(); });
  wrap("crystal", [&] { c.setup().validate(); });
  if (!(c.z >= 0.0)) throw ConfigError(kModule, "z: must be non-negative");
  wrap("grid.n", [&] { MomentumGrid4(c.grid_n, 1.0); });
  wrap("grid.direct_n", [&] { MomentumGrid4(c.direct_n, 1.0); });
  for (const auto& [name, e] : {std::pair{"grid", c.extent}, std::pair{"entanglement", c.entanglement_extent}}) {
    if (!(e.pump_factor >= 0.0 && e.phase_matching_factor >= 0.0 &&
          e.pump_factor + e.phase_matching_factor > 0.0)) {
      throw ConfigError(kModule, std::string(name) + ": extent factors must be non-negative and not both zero");
    }
  }
  if (!(c.truncation_tolerance > 0.0)) {
    throw ConfigError(kModule, "grid.truncation_tolerance: must be positive");
  }
  if (c.entanglement.points != 0) wrap("entanglement.points", [&] { MomentumGrid4(c.entanglement.points, 1.0); });
  wrap("entanglement.binning", [&] {
    const int b = c.entanglement.binning;
    if (b < 1 || (b & (b - 1)) != 0) throw ConfigError(kModule, "must be a power of two >= 1");
  });
  wrap("coincidence", [&] { c.detector.validate(); });
  if (!(c.mu_pairs >= 0.0) || !std::isfinite(c.mu_pairs)) {
    throw ConfigError(kModule, "coincidence.mu_pairs: must be non-negative");
  }
  wrap("sellmeier", [&] {
    const auto model = c.model();
    TypeIGeometry(model, c.lambda_p, c.theta_p);
  });
  return c;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file, const Overrides& overrides,
                       const char* output_dir_env) {
  nlohmann::json doc;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw IoError(kModule, "cannot open config file " + file->string());
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(kModule, file->string() + ": " + e.what());
    }
  }
  return parse_config_json(doc, overrides, output_dir_env);
}

SellmeierModel RunConfig::model() const {
  return sellmeier.empty() ? SellmeierModel::bbo() : SellmeierModel::load(sellmeier);
}

PumpSpec RunConfig::pump() const { return PumpSpec{lambda_p, waist, 1.0}; }

CrystalSetup RunConfig::setup() const {
  CrystalSetup s;
  if (double_crystal) s.kind = DoubleCrystal{length, gap};
  else s.kind = SingleCrystal{length};
  s.theta_p = theta_p;
  return s;
}

FieldOptions RunConfig::field_options() const {
  FieldOptions o;
  o.truncation_tolerance = truncation_tolerance;
  o.memory_budget_bytes = memory_budget_mb << 20;
  return o;
}

EntanglementConfig RunConfig::entanglement_config() const {
  EntanglementConfig e;
  e.model = model();
  e.pump = pump();
  e.setup = setup();
  e.extent = entanglement_extent;
  e.grid = entanglement;
  return e;
}

nlohmann::json RunConfig::physics_json() const {
  const auto m = model();
  auto terms = [](const SellmeierTerms& t) { return nlohmann::json::array({t.a, t.b, t.c, t.d}); };
  return {
      {"sellmeier",
       {{"name", m.name()},
        {"o", terms(m.terms(Polarization::ordinary))},
        {"e", terms(m.terms(Polarization::extraordinary))},
        {"window_m", {m.lambda_min(), m.lambda_max()}}}},
      {"pump", {{"wavelength", lambda_p}, {"signal_wavelength", lambda_s}, {"waist", waist}}},
      {"crystal",
       {{"kind", double_crystal ? "double" : "single"},
        {"length", length},
        {"gap", gap},
        {"theta_p", theta_p}}},
      {"z", z},
      {"grid",
       {{"n", grid_n},
        {"direct_n", direct_n},
        {"pump_factor", extent.pump_factor},
        {"phase_matching_factor", extent.phase_matching_factor},
        {"truncation_tolerance", truncation_tolerance}}},
      {"entanglement",
       {{"points", entanglement.points},
        {"min_points", entanglement.min_points},
        {"max_points", entanglement.max_points},
        {"max_dq_w0", entanglement.max_dq_w0},
        {"pump_factor", entanglement_extent.pump_factor},
        {"phase_matching_factor", entanglement_extent.phase_matching_factor},
        {"binning", entanglement.binning}}},
      {"coincidence",
       {{"pixel_pitch", detector.pixel_pitch},
        {"quantum_efficiency", detector.quantum_efficiency},
        {"dark_rate", detector.dark_rate},
        {"roi_width", detector.roi_width},
        {"roi_height", detector.roi_height},
        {"mu_pairs", mu_pairs},
        {"frames", frames},
        {"seed", seed}}},
  };
}

std::string RunConfig::fingerprint(const nlohmann::json& command) const {
  const std::string text = nlohmann::json{{"config", physics_json()}, {"command", command}}.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw ResourceError(kModule, "SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xF];
  }
  return out;
}

}  // namespace spdc::cli
