#pragma once

// Four-dimensional biphoton fields on a shared centered momentum grid:
// sampling of V(q_s + q_i) Phi(q_s, q_i), free-space propagation, the
// transform to position space and the reductions to joint, averaged,
// conditional and single-photon distributions.
//
// Axis order for every 4D array is (s_x, s_y, i_x, i_y), row-major.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spdc/fft.hpp"
#include "spdc/phasematch.hpp"

namespace spdc {

/// N points per axis, spacing dq; node n sits at q = (n - N/2) dq. The
/// conjugate position grid has dx = 2 pi / (N dq).
class MomentumGrid4 {
 public:
  MomentumGrid4(int n, double dq);

  int n() const noexcept { return n_; }
  double dq() const noexcept { return dq_; }
  double dx() const noexcept;
  double q(int index) const noexcept { return (index - n_ / 2) * dq_; }
  double x(int index) const noexcept { return (index - n_ / 2) * dx(); }
  double q_max() const noexcept { return (n_ / 2) * dq_; }
  std::size_t size() const noexcept;

 private:
  int n_;
  double dq_;
};

/// q_max = pump_factor / w0 + phase_matching_factor * sqrt(4 pi / (L lambda_s / (2 pi n_so))).
struct ExtentPolicy {
  double pump_factor = 6.0;
  double phase_matching_factor = 1.5;
};

double auto_extent(const TwoPhotonSource& source, const ExtentPolicy& policy = {});
/// Grid of n points spanning [-q_max, q_max) with q_max from auto_extent.
MomentumGrid4 auto_grid(int n, const TwoPhotonSource& source, const ExtentPolicy& policy = {});

enum class Basis { momentum, position };

struct FieldOptions {
  double truncation_tolerance = 5e-3;  // |A|^2 mass on the outer index shell
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
};

/// Bytes held by one N^4 complex array.
std::size_t amplitude_bytes(const MomentumGrid4& grid) noexcept;

class BiphotonAmplitude4 {
 public:
  BiphotonAmplitude4(MomentumGrid4 grid, ComplexBuffer values, Basis basis, double z,
                     double k_signal, double k_idler);

  const MomentumGrid4& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Basis basis() const noexcept { return basis_; }
  double z() const noexcept { return z_; }
  double k_signal() const noexcept { return k_signal_; }
  double k_idler() const noexcept { return k_idler_; }

  /// Sum |values|^2 times the bin volume of the current basis.
  double total_probability() const noexcept;
  std::size_t index(int sx, int sy, int ix, int iy) const noexcept;
  const Complex& at(int sx, int sy, int ix, int iy) const noexcept {
    return values_[index(sx, sy, ix, iy)];
  }

 private:
  MomentumGrid4 grid_;
  ComplexBuffer values_;
  Basis basis_;
  double z_;
  double k_signal_;
  double k_idler_;
};

/// Samples the source on the grid and L2-normalises (sum |A|^2 dq^4 = 1).
/// Throws ConfigError when the outer shell of nodes holds more than the
/// tolerated fraction of sum |A|^2, and
/// ResourceError when the array does not fit the memory budget.
BiphotonAmplitude4 build_amplitude(const MomentumGrid4& grid, const TwoPhotonSource& source,
                                   const FieldOptions& options = {});

/// Multiplies by exp[-i(|q_s|^2 z / 2k_s + |q_i|^2 z / 2k_i)]; adds z.
BiphotonAmplitude4 propagate(const BiphotonAmplitude4& amp, double z);

/// Unitary centered 4-axis transform,
///   psi(x) = (dq / sqrt(2 pi))^4 sum_q A(q) exp(+i q . x).
BiphotonAmplitude4 to_position(const BiphotonAmplitude4& amp, const FieldOptions& options = {});

struct AxisInfo {
  std::string name;
  double bin_width = 0.0;
  std::string unit;
};

/// Non-negative array (rank 2 or 4) of probability masses with axis
/// metadata. Axis k has its origin at index shape[k] / 2.
class Distribution {
 public:
  /// Validates entries (finite, >= 0). With normalize = true the values are
  /// divided by their sum, which must be positive.
  Distribution(std::vector<std::size_t> shape, std::vector<AxisInfo> axes, Basis basis,
               std::vector<double> values, bool normalize);

  std::size_t rank() const noexcept { return shape_.size(); }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  const std::vector<AxisInfo>& axes() const noexcept { return axes_; }
  Basis basis() const noexcept { return basis_; }
  std::span<const double> values() const noexcept { return values_; }
  bool is_normalized() const noexcept { return normalized_; }
  double total() const noexcept;

  /// Rank-2 element access (row, column).
  double operator()(std::size_t r, std::size_t c) const noexcept {
    return values_[r * shape_[1] + c];
  }
  /// Coordinate of node k along axis a.
  double coordinate(std::size_t a, std::size_t k) const noexcept;

 private:
  std::vector<std::size_t> shape_;
  std::vector<AxisInfo> axes_;
  Basis basis_;
  std::vector<double> values_;
  bool normalized_ = false;
};

/// Names and units of the four axes in a basis.
std::vector<AxisInfo> axes4(const MomentumGrid4& grid, Basis basis);

/// |A|^2 normalised to unit sum; z-independent.
Distribution momentum_pdf(const BiphotonAmplitude4& amp);
/// |psi|^2 normalised to unit sum. Requires the position basis.
Distribution position_pdf(const BiphotonAmplitude4& amp);

/// Sum over (y_s, y_i): P(x_s, x_i), rows indexed by the signal.
Distribution averaged_joint_x(const Distribution& dist4);
/// Sum over (x_s, x_i): P(y_s, y_i).
Distribution averaged_joint_y(const Distribution& dist4);

/// A transverse point in the distribution's own units (m or rad/m).
struct TransversePoint {
  double x = 0.0;
  double y = 0.0;
};

/// Slice at the idler node nearest to rho_i0, renormalised: P(s_x, s_y | rho_i0).
/// Throws DomainError when the slice holds less than 1e-12 of the total.
Distribution conditional_position(const Distribution& dist4, TransversePoint rho_i0 = {});

/// Sum over both idler axes: the one-photon image P(s_x, s_y).
Distribution singles(const Distribution& dist4);

}  // namespace spdc
