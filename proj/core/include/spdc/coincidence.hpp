#pragma once

// Synthetic single-photon camera: frames of integer counts drawn from a 4D
// position distribution, and the accidental-subtracted coincidence estimator
//
//   C_pq = <n_p n_q>_same frame - <n_p n_q>_next frame,
//
// with the next frame of the last one taken cyclically as the first. On the
// diagonal the same-frame product is the factorial moment n_p (n_p - 1).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "spdc/fields.hpp"

namespace spdc {

struct DetectorModel {
  double pixel_pitch = 16e-6;      // m
  double quantum_efficiency = 0.6;
  double dark_rate = 1e-3;         // counts per pixel per frame
  int roi_width = 48;              // pixels along x
  int roi_height = 48;             // pixels along y

  void validate() const;
  /// Pixel column/row holding coordinate u, or -1 outside the ROI. The ROI
  /// is centred on the optical axis.
  int pixel_of(double u, int extent) const noexcept;
};

/// Counts for n frames of height x width pixels, frame-major then row-major
/// (row = y pixel, column = x pixel).
class FrameStack {
 public:
  FrameStack(int width, int height, std::size_t frames, std::uint64_t seed,
             std::string fingerprint, std::vector<std::uint16_t> counts);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t frames() const noexcept { return frames_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  const std::vector<std::uint16_t>& counts() const noexcept { return counts_; }
  std::size_t pixels() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  std::uint16_t at(std::size_t frame, int row, int col) const noexcept {
    return counts_[frame * pixels() + static_cast<std::size_t>(row) * width_ + col];
  }

 private:
  int width_;
  int height_;
  std::size_t frames_;
  std::uint64_t seed_;
  std::string fingerprint_;
  std::vector<std::uint16_t> counts_;
};

struct SynthOptions {
  double mu_pairs = 1.0;
  std::size_t frames = 100000;
  std::uint64_t seed = 1;
  /// Largest probability mass of either photon allowed outside the ROI.
  double support_tolerance = 1e-6;
  std::string fingerprint;
};

/// Seed of frame f derived from the stack seed (SplitMix64 finaliser).
std::uint64_t frame_seed(std::uint64_t seed, std::uint64_t frame) noexcept;

/// Draws K ~ Poisson(mu) pairs per frame from a normalised 4D position
/// distribution (signal from its marginal, idler from the conditional
/// slice), thins each photon by the quantum efficiency and adds Poisson dark
/// counts. Deterministic given the seed.
FrameStack synth_frames(const Distribution& dist4, const DetectorModel& detector,
                        const SynthOptions& options);

/// Reduction choices for the estimator.
struct XPairs {};             // sum each frame over rows, then all column pairs
struct ConditionalRow {       // one fixed pixel q against every pixel p
  int row = 0;
  int col = 0;
};
using Reduction = std::variant<XPairs, ConditionalRow>;

struct CoincidenceMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;      // C, row-major
  std::vector<double> std_error;   // per-cell standard error of C
  std::size_t frames = 0;
  double operator()(std::size_t r, std::size_t c) const noexcept { return values[r * cols + c]; }
};

/// Requires at least two frames. Accumulators are exact 64-bit integers;
/// overflow raises ResourceError.
CoincidenceMap coincidence_map(const FrameStack& stack, const Reduction& reduction);

/// A 2D (x_s, x_i) joint on grid nodes summed into camera columns with the
/// same mapping the sampler uses; rows index the signal column.
std::vector<double> project_joint_to_pixels(const Distribution& joint2,
                                            const DetectorModel& detector);

/// Frame-stack file: one JSON header line, then little-endian uint16 counts.
void write_frames(const FrameStack& stack, const DetectorModel& detector, double mu_pairs,
                  const std::filesystem::path& path);
FrameStack read_frames(const std::filesystem::path& path);

}  // namespace spdc
