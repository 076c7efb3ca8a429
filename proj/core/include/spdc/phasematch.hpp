#pragma once

#include <complex>
#include <variant>

#include "spdc/dispersion.hpp"

namespace spdc {

using Complex = std::complex<double>;

struct SingleCrystal {
  double length = 5e-3;
};

/// Two identical crystals of thickness `length` separated by `gap`. The phase
/// origin sits midway between them.
struct DoubleCrystal {
  double length = 1e-3;
  double gap = 2e-3;
};

struct CrystalSetup {
  std::variant<SingleCrystal, DoubleCrystal> kind = SingleCrystal{};
  double theta_p = 0.0;

  bool is_double() const noexcept { return std::holds_alternative<DoubleCrystal>(kind); }
  /// Thickness of one crystal.
  double crystal_length() const noexcept;
  /// Throws ConfigError unless L > 0, d >= 0 and theta_p in (0, pi/2).
  void validate() const;
};

struct PumpSpec {
  double wavelength = 355e-9;
  double waist = 507e-6;
  double amplitude = 1.0;  // V0; distributions are normalised downstream

  void validate() const;
};

/// sin(x)/x with the removable singularity handled by its series below 1e-4.
double sinc(double x) noexcept;

/// V(q_p) = V0 exp(-|q_p|^2 w0^2 / 4).
Complex pump_envelope(TransverseMomentum q_p, const PumpSpec& pump);

/// sinc(dk L/2) exp(i dk L/2).
Complex phi_single_from_mismatch(double delta_kz, double length) noexcept;
/// sinc(dk L/2) cos(dk (L+d)/2); purely real.
double phi_double_from_mismatch(double delta_kz, double length, double gap) noexcept;

/// A configured down-conversion source: geometry, pump and crystal setup.
/// Evaluates the phase-matching function and the two-photon momentum
/// amplitude V(q_s + q_i) Phi(q_s, q_i).
class TwoPhotonSource {
 public:
  TwoPhotonSource(const SellmeierModel& model, PumpSpec pump, CrystalSetup setup,
                  ParaxialGuard guard = {});

  const TypeIGeometry& geometry() const noexcept { return geometry_; }
  const PumpSpec& pump() const noexcept { return pump_; }
  const CrystalSetup& setup() const noexcept { return setup_; }

  double delta_kz(TransverseMomentum q_s, TransverseMomentum q_i) const {
    return geometry_.delta_kz(q_s, q_i);
  }

  /// Requires a single-crystal setup (ConfigError otherwise).
  Complex phi_single(TransverseMomentum q_s, TransverseMomentum q_i) const;
  /// Requires a double-crystal setup (ConfigError otherwise).
  Complex phi_double(TransverseMomentum q_s, TransverseMomentum q_i) const;
  /// Dispatches on the crystal kind.
  Complex phi(TransverseMomentum q_s, TransverseMomentum q_i) const;

  /// Unnormalised V(q_s + q_i) Phi(q_s, q_i).
  Complex momentum_amplitude(TransverseMomentum q_s, TransverseMomentum q_i) const;

  /// Unchecked hot-path amplitude for grid fills.
  Complex amplitude(double qsx, double qsy, double qix, double qiy) const noexcept {
    const double qpx = qsx + qix;
    const double qpy = qsy + qiy;
    const double v = pump_.amplitude * std::exp(-(qpx * qpx + qpy * qpy) * quarter_w0_sq_);
    const double dk = geometry_.delta_kz(qsx, qsy, qix, qiy);
    if (gap_ < 0.0) return v * phi_single_from_mismatch(dk, length_);
    return Complex(v * phi_double_from_mismatch(dk, length_, gap_), 0.0);
  }

  /// Pump envelope factor alone, for cut-offs: exp(-|q_p|^2 w0^2 / 4) * V0.
  double pump_factor(double qpx, double qpy) const noexcept {
    return pump_.amplitude * std::exp(-(qpx * qpx + qpy * qpy) * quarter_w0_sq_);
  }

 private:
  TypeIGeometry geometry_;
  PumpSpec pump_;
  CrystalSetup setup_;
  double length_ = 0.0;
  double gap_ = -1.0;  // negative for a single crystal
  double quarter_w0_sq_ = 0.0;
};

}  // namespace spdc
