#pragma once

// Discrete Shannon entropies (bits) of two-party joint distributions and the
// entropic lower bound on the entanglement of formation,
//
//   E_f >= 2 log2 M - H(X_s|X_i) - H(K_s|K_i),
//
// evaluated on mutually conjugate position/momentum grids (dx dk = 2 pi / M).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spdc/direct.hpp"
#include "spdc/fields.hpp"

namespace spdc {

/// M x M probability matrix; rows index the signal bin, columns the idler.
class DiscreteJoint {
 public:
  /// Throws DomainError unless entries are >= 0 and sum to 1 within 1e-10.
  DiscreteJoint(std::size_t m, std::vector<double> values, Basis basis, double bin_width);
  /// From a normalised square 2D distribution.
  static DiscreteJoint from_distribution(const Distribution& dist2);

  std::size_t m() const noexcept { return m_; }
  std::span<const double> values() const noexcept { return values_; }
  Basis basis() const noexcept { return basis_; }
  double bin_width() const noexcept { return bin_width_; }
  double operator()(std::size_t s, std::size_t i) const noexcept { return values_[s * m_ + i]; }

 private:
  std::size_t m_;
  std::vector<double> values_;
  Basis basis_;
  double bin_width_;
};

/// -sum p log2 p with 0 log 0 = 0. Throws DomainError unless p sums to 1.
double shannon_entropy(std::span<const double> p);
double joint_entropy(const DiscreteJoint& j);
double signal_entropy(const DiscreteJoint& j);
double idler_entropy(const DiscreteJoint& j);
/// H(s|i) = H(s, i) - H(i).
double conditional_entropy(const DiscreteJoint& j);

struct EntropyTerms {
  double pos_joint = 0.0;
  double pos_idler = 0.0;
  double pos_conditional = 0.0;
  double mom_joint = 0.0;
  double mom_idler = 0.0;
  double mom_conditional = 0.0;
};

struct EfReport {
  std::size_t m = 0;
  /// Totals entering the bound (sums over axes for the transverse form).
  EntropyTerms h;
  /// Per-axis terms; `y` is set only for the transverse form.
  EntropyTerms x;
  std::optional<EntropyTerms> y;
  double ef_min = 0.0;  // 2 log2 M - h.pos_conditional - h.mom_conditional, unclamped
  std::string fingerprint;
};

/// Bound from one position joint and one momentum joint. Throws ConfigError
/// when M differs or the grids are not conjugate.
EfReport ef_min(const DiscreteJoint& pos, const DiscreteJoint& mom);

struct JointPair {
  DiscreteJoint position;
  DiscreteJoint momentum;
};

/// Bound for two-dimensional transverse parties on an M x M pixel grid. The
/// 2D conditional entropies are replaced by the sums of the x and y ones,
/// which can only be larger, so the result stays a valid lower bound.
EfReport ef_min_transverse(const JointPair& x, const JointPair& y);

/// Grid for the entanglement joints. points = 0 picks the smallest power of
/// two with dq * w0 <= max_dq_w0, clamped to [min_points, max_points].
/// binning > 1 box-sums position bins and keeps the central M momentum bins
/// so the pair stays conjugate.
struct EntanglementGridPolicy {
  int points = 0;
  int min_points = 64;
  int max_points = 512;
  double max_dq_w0 = 2.0;
  int binning = 1;
};

MomentumGrid4 entanglement_grid(const TwoPhotonSource& source, const ExtentPolicy& extent,
                                const EntanglementGridPolicy& policy);

/// Position/momentum joints for one axis, down-binned per policy.
JointPair discretize(const AxisJoints& joints, int binning);

struct TransverseJoints {
  JointPair x;
  JointPair y;
};

struct EntanglementConfig {
  SellmeierModel model = SellmeierModel::bbo();
  PumpSpec pump;
  CrystalSetup setup;
  ParaxialGuard guard;
  ExtentPolicy extent{6.0, 2.0};
  EntanglementGridPolicy grid;
  DirectOptions direct;
};

TransverseJoints build_discrete_joints(const EntanglementConfig& config, double z);

/// Transverse bound at distance z.
EfReport evaluate_ef(const EntanglementConfig& config, double z);

enum class ScanParameter { z, theta_p, gap };

struct ScanPoint {
  double value = 0.0;
  std::optional<EfReport> report;
  std::string error;  // set when the point failed
};

/// Evaluates each value in order; per-point failures are recorded, not
/// thrown. `z` is the propagation distance for theta_p and gap scans.
/// A gap scan requires a double-crystal setup (ConfigError).
std::vector<ScanPoint> scan(const EntanglementConfig& config, double z, ScanParameter parameter,
                            std::span<const double> values);

}  // namespace spdc
