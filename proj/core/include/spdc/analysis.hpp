#pragma once

// Shape statistics of 2D distributions used to characterise conditional
// patterns and joint correlations.

#include <cstddef>
#include <vector>

#include "spdc/fields.hpp"

namespace spdc {

/// Mean value on rings of integer pixel radius round(|r|) about the origin
/// node (rows/2, cols/2); entry r covers radii in [r - 1/2, r + 1/2).
/// Rings extend to the largest radius fully inside the array.
std::vector<double> radial_profile(const Distribution& dist2);

/// Index of the largest entry (first on ties).
std::size_t argmax(const std::vector<double>& profile);

/// Strict local maxima of a 1D profile. The first entry counts when it
/// exceeds its neighbour; the last entry never counts. Entries below
/// relative_floor * max are ignored.
std::size_t count_local_maxima(const std::vector<double>& profile, double relative_floor = 0.0);

/// Pearson correlation of the two axis coordinates under a 2D distribution.
double pearson_correlation(const Distribution& dist2);

/// Mass within `width` cells of the diagonal (anti = false) or of the
/// anti-diagonal about the origin (anti = true), i.e. |r - c| <= width or
/// |(r - rows/2) + (c - cols/2)| <= width.
double diagonal_band_mass(const Distribution& dist2, int width = 1, bool anti = false);

}  // namespace spdc
