#pragma once

// Exact reductions of the propagated position field computed without
// materialising the N^4 array. Both routes sample the same four axes as a
// MomentumGrid4 and agree with the 4D pipeline up to the pump cut-off.
//
// Averaged joints: only the two axes kept are transformed; the summed pair is
// handled in momentum space (Parseval), one 2D FFT per summed-axis pair.
// Conditional slice: the idler momentum sum is done first at the fixed idler
// node, then one 2D FFT over the signal momentum.

#include "spdc/fields.hpp"

namespace spdc {

enum class TransverseAxis { x, y };

struct DirectOptions {
  /// Terms with pump envelope below this fraction of V0 are dropped.
  double pump_cutoff = 1e-8;
  /// Largest fraction of momentum probability allowed on the outermost grid ring.
  double boundary_mass_tolerance = 5e-3;
};

struct AxisJoints {
  Distribution position;  // P(x_s, x_i) or P(y_s, y_i) at z
  Distribution momentum;  // P(q_s, q_i) along the same axis
  double boundary_mass = 0.0;
};

AxisJoints averaged_joints_direct(const MomentumGrid4& grid, const TwoPhotonSource& source,
                                  double z, TransverseAxis axis,
                                  const DirectOptions& options = {});

/// P(x_s, y_s | rho_i0; z), with rho_i0 snapped to the nearest position node.
Distribution conditional_position_direct(const MomentumGrid4& grid,
                                         const TwoPhotonSource& source, double z,
                                         TransversePoint rho_i0 = {},
                                         const DirectOptions& options = {});

}  // namespace spdc
