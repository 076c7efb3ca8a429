#include "spdc/phasematch.hpp"

#include <cmath>
#include <numbers>

#include "spdc/errors.hpp"

namespace spdc {
namespace {
constexpr const char* kModule = "phasematch";
}

double CrystalSetup::crystal_length() const noexcept {
  return std::visit([](const auto& k) { return k.length; }, kind);
}

void CrystalSetup::validate() const {
  if (!(crystal_length() > 0.0)) throw ConfigError(kModule, "crystal length must be positive");
  if (const auto* dbl = std::get_if<DoubleCrystal>(&kind); dbl && !(dbl->gap >= 0.0)) {
    throw ConfigError(kModule, "crystal gap must be non-negative");
  }
  if (!(theta_p > 0.0 && theta_p < std::numbers::pi / 2)) {
    throw ConfigError(kModule, "theta_p must lie in (0, pi/2)");
  }
}

void PumpSpec::validate() const {
  if (!(waist > 0.0)) throw ConfigError(kModule, "pump waist must be positive");
  if (!(wavelength > 0.0)) throw ConfigError(kModule, "pump wavelength must be positive");
  if (!(amplitude > 0.0)) throw ConfigError(kModule, "pump amplitude must be positive");
}

double sinc(double x) noexcept {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

Complex pump_envelope(TransverseMomentum q_p, const PumpSpec& pump) {
  return {pump.amplitude * std::exp(-q_p.norm_squared() * pump.waist * pump.waist / 4.0), 0.0};
}

Complex phi_single_from_mismatch(double delta_kz, double length) noexcept {
  const double half = 0.5 * delta_kz * length;
  const double s = sinc(half);
  return {s * std::cos(half), s * std::sin(half)};
}

double phi_double_from_mismatch(double delta_kz, double length, double gap) noexcept {
  return sinc(0.5 * delta_kz * length) * std::cos(0.5 * delta_kz * (length + gap));
}

TwoPhotonSource::TwoPhotonSource(const SellmeierModel& model, PumpSpec pump, CrystalSetup setup,
                                 ParaxialGuard guard)
    : geometry_((pump.validate(), setup.validate(), model), pump.wavelength, setup.theta_p, guard),
      pump_(pump),
      setup_(setup) {
  length_ = setup_.crystal_length();
  if (const auto* dbl = std::get_if<DoubleCrystal>(&setup_.kind)) gap_ = dbl->gap;
  quarter_w0_sq_ = pump_.waist * pump_.waist / 4.0;
}

Complex TwoPhotonSource::phi_single(TransverseMomentum q_s, TransverseMomentum q_i) const {
  if (setup_.is_double()) throw ConfigError(kModule, "phi_single requires a single crystal");
  return phi_single_from_mismatch(delta_kz(q_s, q_i), length_);
}

Complex TwoPhotonSource::phi_double(TransverseMomentum q_s, TransverseMomentum q_i) const {
  if (!setup_.is_double()) throw ConfigError(kModule, "phi_double requires a double crystal");
  return {phi_double_from_mismatch(delta_kz(q_s, q_i), length_, gap_), 0.0};
}

Complex TwoPhotonSource::phi(TransverseMomentum q_s, TransverseMomentum q_i) const {
  return setup_.is_double() ? phi_double(q_s, q_i) : phi_single(q_s, q_i);
}

Complex TwoPhotonSource::momentum_amplitude(TransverseMomentum q_s,
                                            TransverseMomentum q_i) const {
  return pump_envelope(q_s + q_i, pump_) * phi(q_s, q_i);
}

}  // namespace spdc
