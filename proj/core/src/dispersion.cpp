#include "spdc/dispersion.hpp"

#include <boost/math/tools/roots.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {
namespace {

constexpr const char* kModule = "dispersion";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, int line) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw IoError(kModule, "line " + std::to_string(line) + ": not a number: '" +
                               std::string(text) + "'");
  }
  return value;
}

}  // namespace

SellmeierModel::SellmeierModel(std::string name, SellmeierTerms ordinary,
                               SellmeierTerms extraordinary, double lambda_min, double lambda_max)
    : name_(std::move(name)),
      ordinary_(ordinary),
      extraordinary_(extraordinary),
      lambda_min_(lambda_min),
      lambda_max_(lambda_max) {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min)) {
    throw ConfigError(kModule, "invalid Sellmeier validity window");
  }
}

SellmeierModel SellmeierModel::bbo() {
  return SellmeierModel("BBO", {2.7405, 0.0184, 0.0179, 0.0155}, {2.3730, 0.0128, 0.0156, 0.0044},
                        0.3e-6, 1.1e-6);
}

SellmeierModel SellmeierModel::parse(std::string_view text) {
  std::map<std::string, double, std::less<>> values;
  std::string name = "unnamed";
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw IoError(kModule, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "name") {
      name = std::string(value);
      continue;
    }
    static constexpr std::string_view known[] = {"lambda_min_um", "lambda_max_um", "o.A", "o.B",
                                                 "o.C", "o.D", "e.A", "e.B", "e.C", "e.D"};
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) {
      throw IoError(kModule, "line " + std::to_string(line_no) + ": unknown key '" +
                                 std::string(key) + "'");
    }
    values[std::string(key)] = parse_number(value, line_no);
  }
  auto get = [&](std::string_view key) {
    const auto it = values.find(key);
    if (it == values.end()) throw IoError(kModule, "missing key '" + std::string(key) + "'");
    return it->second;
  };
  return SellmeierModel(name, {get("o.A"), get("o.B"), get("o.C"), get("o.D")},
                        {get("e.A"), get("e.B"), get("e.C"), get("e.D")},
                        get("lambda_min_um") * 1e-6, get("lambda_max_um") * 1e-6);
}

SellmeierModel SellmeierModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(kModule, "cannot open Sellmeier file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

double SellmeierModel::refractive_index(Polarization polarization, double wavelength) const {
  if (!(wavelength >= lambda_min_ && wavelength <= lambda_max_)) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength * 1e9 << " nm outside the " << name_
        << " Sellmeier window [" << lambda_min_ * 1e9 << ", " << lambda_max_ * 1e9 << "] nm";
    throw DomainError(kModule, msg.str());
  }
  const double n2 = terms(polarization).index_squared(wavelength * 1e6);
  if (!(n2 > 1.0)) throw DomainError(kModule, "Sellmeier formula gives n <= 1");
  return std::sqrt(n2);
}

PumpAnisotropy pump_coefficients(const SellmeierModel& model, double theta_p, double lambda_p) {
  if (!(theta_p >= 0.0 && theta_p <= std::numbers::pi / 2)) {
    throw DomainError(kModule, "theta_p must lie in [0, pi/2]");
  }
  const double npo = model.refractive_index(Polarization::ordinary, lambda_p);
  const double npe = model.refractive_index(Polarization::extraordinary, lambda_p);
  const double s = std::sin(theta_p);
  const double c = std::cos(theta_p);
  const double denom = npo * npo * s * s + npe * npe * c * c;
  const double root = std::sqrt(denom);
  return PumpAnisotropy{
      .alpha = (npo * npo - npe * npe) * s * c / denom,
      .beta = npo * npe / denom,
      .gamma = npo / root,
      .eta = npo * npe / root,
  };
}

void require_degenerate(double lambda_p, double lambda_s) {
  if (!(lambda_p > 0.0)) throw ConfigError(kModule, "pump wavelength must be positive");
  if (std::abs(lambda_s - 2.0 * lambda_p) > 1e-9 * lambda_s) {
    throw ConfigError(kModule,
                      "only degenerate down-conversion (lambda_s = lambda_i = 2 lambda_p) is "
                      "supported");
  }
}

TypeIGeometry::TypeIGeometry(const SellmeierModel& model, double lambda_p, double theta_p,
                             ParaxialGuard guard)
    : lambda_p_(lambda_p), theta_p_(theta_p), guard_(guard) {
  if (!(guard.max_ratio > 0.0 && guard.max_ratio < 1.0)) {
    throw ConfigError(kModule, "paraxial ratio threshold must lie in (0, 1)");
  }
  coeffs_ = pump_coefficients(model, theta_p, lambda_p);
  n_po_ = model.refractive_index(Polarization::ordinary, lambda_p);
  n_pe_ = model.refractive_index(Polarization::extraordinary, lambda_p);
  n_so_ = model.refractive_index(Polarization::ordinary, 2.0 * lambda_p);
  kp0_ = 2.0 * std::numbers::pi / lambda_p;
  ks0_ = 2.0 * std::numbers::pi / (2.0 * lambda_p);
  mismatch0_ = 2.0 * n_so_ * ks0_ - coeffs_.eta * kp0_;
  inv_2ks_ = 1.0 / (2.0 * n_so_ * ks0_);
  inv_2etakp_ = 1.0 / (2.0 * coeffs_.eta * kp0_);
  beta2_ = coeffs_.beta * coeffs_.beta;
  gamma2_ = coeffs_.gamma * coeffs_.gamma;
}

bool TypeIGeometry::is_paraxial(TransverseMomentum q) const noexcept {
  return std::sqrt(q.norm_squared()) < guard_.max_ratio * signal_wavenumber();
}

bool TypeIGeometry::check_paraxial(TransverseMomentum q) const {
  if (is_paraxial(q)) return true;
  if (guard_.policy == ParaxialPolicy::error) {
    std::ostringstream msg;
    msg << "|q| = " << std::sqrt(q.norm_squared()) << " rad/m exceeds the paraxial limit "
        << paraxial_limit() << " rad/m (ratio " << guard_.max_ratio << ")";
    throw DomainError(kModule, msg.str());
  }
  return false;
}

LongitudinalWavevectors TypeIGeometry::longitudinal_wavevectors(TransverseMomentum q_s,
                                                                TransverseMomentum q_i) const {
  check_paraxial(q_s);
  check_paraxial(q_i);
  const TransverseMomentum q_p = q_s + q_i;
  const double ks = n_so_ * ks0_;
  const double etak = coeffs_.eta * kp0_;
  LongitudinalWavevectors k;
  k.pump = -coeffs_.alpha * q_p.x + etak - (beta2_ * q_p.x * q_p.x + gamma2_ * q_p.y * q_p.y) /
                                               (2.0 * etak);
  k.signal = ks - q_s.norm_squared() / (2.0 * ks);
  k.idler = ks - q_i.norm_squared() / (2.0 * ks);
  return k;
}

double TypeIGeometry::delta_kz(TransverseMomentum q_s, TransverseMomentum q_i) const {
  check_paraxial(q_s);
  check_paraxial(q_i);
  return delta_kz(q_s.x, q_s.y, q_i.x, q_i.y);
}

double collinear_angle(const SellmeierModel& model, double lambda_p, double lambda_s) {
  require_degenerate(lambda_p, lambda_s);
  const double n_so = model.refractive_index(Polarization::ordinary, lambda_s);
  const double kp0 = 2.0 * std::numbers::pi / lambda_p;
  const double ks0 = 2.0 * std::numbers::pi / lambda_s;
  auto mismatch = [&](double theta) {
    return 2.0 * n_so * ks0 - pump_coefficients(model, theta, lambda_p).eta * kp0;
  };

  // Coarse scan for a sign change, then bracketed refinement.
  constexpr int kScan = 512;
  const double half_pi = std::numbers::pi / 2;
  double lo = 0.0;
  double f_lo = mismatch(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double hi = half_pi * i / kScan;
    const double f_hi = mismatch(hi);
    if (f_lo == 0.0) return lo;
    if ((f_lo < 0.0) != (f_hi < 0.0)) {
      std::uintmax_t max_iter = 200;
      const auto tol = [](double a, double b) { return std::abs(b - a) < 1e-10; };
      const auto [a, b] =
          boost::math::tools::toms748_solve(mismatch, lo, hi, f_lo, f_hi, tol, max_iter);
      return 0.5 * (a + b);
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw DomainError(kModule, "no collinear phase matching for this pump wavelength");
}

}  // namespace spdc
