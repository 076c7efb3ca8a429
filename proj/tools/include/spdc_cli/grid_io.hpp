#pragma once

// Array writers: GRD1 (JSON header line + little-endian float64, row-major),
// CSV and binary PGM previews for 2D arrays. Every file carries the config
// fingerprint. Writes are atomic.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "spdc/fields.hpp"

namespace spdc::cli {

struct GridAxis {
  std::string name;
  double bin_width = 0.0;
  std::string unit;
  friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

struct GridData {
  std::vector<std::size_t> shape;
  std::vector<GridAxis> axes;
  std::vector<double> values;
  std::string fingerprint;
};

GridData grid_from(const Distribution& dist, std::string fingerprint);

/// Throws DomainError for NaN/Inf entries, IoError on I/O failure.
void write_grd(const GridData& grid, const std::filesystem::path& path);
GridData read_grd(const std::filesystem::path& path);

/// Wide CSV: a "# fingerprint" comment line, a header naming both axes and
/// listing column coordinates, then one row per first-axis node.
void write_csv(const GridData& grid, const std::filesystem::path& path);

/// P5 8-bit preview, values scaled so the maximum maps to 255.
void write_pgm(const GridData& grid, const std::filesystem::path& path);

}  // namespace spdc::cli
