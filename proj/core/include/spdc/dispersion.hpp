#pragma once

// Closed-form crystal optics for degenerate type-I (e -> o + o) down-conversion
// in a negative uniaxial crystal: refractive indices, the pump anisotropy
// coefficients, paraxial longitudinal wavevectors and the phase mismatch.
//
// All quantities are SI: wavelengths in meters, wavevectors in rad/m, angles
// in radians. Micrometers appear only inside the Sellmeier formula.

#include <filesystem>
#include <string>
#include <string_view>

namespace spdc {

enum class Polarization { ordinary, extraordinary };

/// n^2(lambda) = a + b / (lambda^2 - c) - d * lambda^2, lambda in micrometers.
struct SellmeierTerms {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double index_squared(double lambda_um) const noexcept {
    const double l2 = lambda_um * lambda_um;
    return a + b / (l2 - c) - d * l2;
  }
};

class SellmeierModel {
 public:
  SellmeierModel(std::string name, SellmeierTerms ordinary, SellmeierTerms extraordinary,
                 double lambda_min, double lambda_max);

  /// The embedded BBO coefficient set (same values as data/bbo.sellmeier).
  static SellmeierModel bbo();

  /// Parses the plain-text key/value coefficient format. Throws IoError on
  /// malformed input, naming the offending line.
  static SellmeierModel parse(std::string_view text);
  static SellmeierModel load(const std::filesystem::path& path);

  /// Throws DomainError when the wavelength is outside the validity window.
  double refractive_index(Polarization polarization, double wavelength) const;

  const std::string& name() const noexcept { return name_; }
  double lambda_min() const noexcept { return lambda_min_; }
  double lambda_max() const noexcept { return lambda_max_; }
  const SellmeierTerms& terms(Polarization polarization) const noexcept {
    return polarization == Polarization::ordinary ? ordinary_ : extraordinary_;
  }

 private:
  std::string name_;
  SellmeierTerms ordinary_;
  SellmeierTerms extraordinary_;
  double lambda_min_;
  double lambda_max_;
};

/// Extraordinary-pump coefficients evaluated at (theta_p, lambda_p).
struct PumpAnisotropy {
  double alpha = 0.0;  // walk-off, multiplies q_px
  double beta = 0.0;
  double gamma = 0.0;
  double eta = 0.0;    // effective extraordinary index along the pump direction
};

PumpAnisotropy pump_coefficients(const SellmeierModel& model, double theta_p, double lambda_p);

/// Transverse wavevector (q_x, q_y) in rad/m.
struct TransverseMomentum {
  double x = 0.0;
  double y = 0.0;

  double norm_squared() const noexcept { return x * x + y * y; }
  friend TransverseMomentum operator+(TransverseMomentum a, TransverseMomentum b) noexcept {
    return {a.x + b.x, a.y + b.y};
  }
  friend TransverseMomentum operator-(TransverseMomentum a) noexcept { return {-a.x, -a.y}; }
};

struct LongitudinalWavevectors {
  double pump = 0.0;
  double signal = 0.0;
  double idler = 0.0;
};

enum class ParaxialPolicy { warn, error };

/// |q| / k above max_ratio is outside the paraxial expansions' trust region.
struct ParaxialGuard {
  double max_ratio = 0.2;
  ParaxialPolicy policy = ParaxialPolicy::error;
};

/// Degenerate type-I geometry at a fixed phase-matching angle. The signal and
/// idler wavelengths are both 2 * lambda_p.
class TypeIGeometry {
 public:
  TypeIGeometry(const SellmeierModel& model, double lambda_p, double theta_p,
                ParaxialGuard guard = {});

  double pump_wavelength() const noexcept { return lambda_p_; }
  double signal_wavelength() const noexcept { return 2.0 * lambda_p_; }
  double theta_p() const noexcept { return theta_p_; }
  const PumpAnisotropy& anisotropy() const noexcept { return coeffs_; }
  const ParaxialGuard& guard() const noexcept { return guard_; }

  double pump_vacuum_wavenumber() const noexcept { return kp0_; }    // K_p0
  double signal_vacuum_wavenumber() const noexcept { return ks0_; }  // K_s0 = K_i0
  double signal_index() const noexcept { return n_so_; }             // n_so = n_io
  double pump_ordinary_index() const noexcept { return n_po_; }
  double pump_extraordinary_index() const noexcept { return n_pe_; }
  /// Scalar wavenumbers k_s = n_so K_s0 and k_i = n_io K_i0 used for propagation.
  double signal_wavenumber() const noexcept { return n_so_ * ks0_; }
  double idler_wavenumber() const noexcept { return n_so_ * ks0_; }

  /// Paraxial k_pz, k_sz, k_iz. Applies the paraxial guard to both photons.
  LongitudinalWavevectors longitudinal_wavevectors(TransverseMomentum q_s,
                                                   TransverseMomentum q_i) const;

  /// Delta k_z = k_sz + k_iz - k_pz, with the paraxial guard.
  double delta_kz(TransverseMomentum q_s, TransverseMomentum q_i) const;

  /// Unchecked form for grid fills; algebraically identical to the checked one.
  double delta_kz(double qsx, double qsy, double qix, double qiy) const noexcept {
    const double qpx = qsx + qix;
    const double qpy = qsy + qiy;
    // k_s == k_i, so the quadratic terms share one factor; the sum is written
    // to be bitwise symmetric under signal <-> idler exchange.
    return mismatch0_ - ((qsx * qsx + qsy * qsy) + (qix * qix + qiy * qiy)) * inv_2ks_ +
           coeffs_.alpha * qpx + (beta2_ * qpx * qpx + gamma2_ * qpy * qpy) * inv_2etakp_;
  }

  /// True when |q| / k_s is inside the guard's ratio.
  bool is_paraxial(TransverseMomentum q) const noexcept;
  /// Throws DomainError under ParaxialPolicy::error; returns false under warn.
  bool check_paraxial(TransverseMomentum q) const;
  /// Largest |q| accepted by the guard.
  double paraxial_limit() const noexcept { return guard_.max_ratio * signal_wavenumber(); }

 private:
  double lambda_p_;
  double theta_p_;
  ParaxialGuard guard_;
  PumpAnisotropy coeffs_;
  double n_po_ = 0.0;
  double n_pe_ = 0.0;
  double n_so_ = 0.0;
  double kp0_ = 0.0;
  double ks0_ = 0.0;
  double mismatch0_ = 0.0;  // n_so K_s0 + n_io K_i0 - eta K_p0
  double inv_2ks_ = 0.0;
  double inv_2etakp_ = 0.0;
  double beta2_ = 0.0;
  double gamma2_ = 0.0;
};

/// Collinear phase-matching angle: the root of Delta k_z(0, 0; theta) on
/// (0, pi/2), found to 1e-8 rad. Only degenerate lambda_s = 2 lambda_p is
/// accepted.
double collinear_angle(const SellmeierModel& model, double lambda_p, double lambda_s);

/// Rejects non-degenerate signal wavelengths (ConfigError).
void require_degenerate(double lambda_p, double lambda_s);

}  // namespace spdc
