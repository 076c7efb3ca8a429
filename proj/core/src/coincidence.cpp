#include "spdc/coincidence.hpp"

#include <boost/random/discrete_distribution.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {
namespace {

constexpr const char* kModule = "coincidence";

using Alias = boost::random::discrete_distribution<std::uint32_t, double>;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceError(kModule, "coincidence accumulator overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceError(kModule, "coincidence accumulator overflow");
  return r;
}

void bump(std::vector<std::uint16_t>& counts, std::size_t index) {
  if (counts[index] == std::numeric_limits<std::uint16_t>::max()) {
    throw ResourceError(kModule, "pixel count exceeds the 16-bit range");
  }
  ++counts[index];
}

struct Accumulator {
  std::vector<std::int64_t> sum;
  std::vector<std::int64_t> sum_sq;

  explicit Accumulator(std::size_t cells) : sum(cells, 0), sum_sq(cells, 0) {}

  void add(std::size_t cell, std::int64_t d) {
    sum[cell] = checked_add(sum[cell], d);
    sum_sq[cell] = checked_add(sum_sq[cell], checked_mul(d, d));
  }

  CoincidenceMap finish(std::size_t rows, std::size_t cols, std::size_t frames) const {
    CoincidenceMap map;
    map.rows = rows;
    map.cols = cols;
    map.frames = frames;
    map.values.resize(sum.size());
    map.std_error.resize(sum.size());
    const double n = static_cast<double>(frames);
    for (std::size_t c = 0; c < sum.size(); ++c) {
      const double s = static_cast<double>(sum[c]);
      const double mean = s / n;
      const double var = std::max(0.0, (static_cast<double>(sum_sq[c]) - s * mean) / (n - 1.0));
      map.values[c] = mean;
      map.std_error[c] = std::sqrt(var / n);
    }
    return map;
  }
};

}  // namespace

void DetectorModel::validate() const {
  if (!(pixel_pitch > 0.0)) throw ConfigError(kModule, "pixel pitch must be positive");
  if (!(quantum_efficiency >= 0.0 && quantum_efficiency <= 1.0)) {
    throw ConfigError(kModule, "quantum efficiency must lie in [0, 1]");
  }
  if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate)) {
    throw ConfigError(kModule, "dark-count rate must be non-negative");
  }
  if (roi_width < 1 || roi_height < 1) throw ConfigError(kModule, "ROI must be at least 1 x 1");
}

int DetectorModel::pixel_of(double u, int extent) const noexcept {
  const double p = std::floor(u / pixel_pitch + 0.5 * extent);
  if (!(p >= 0.0 && p < extent)) return -1;
  return static_cast<int>(p);
}

FrameStack::FrameStack(int width, int height, std::size_t frames, std::uint64_t seed,
                       std::string fingerprint, std::vector<std::uint16_t> counts)
    : width_(width),
      height_(height),
      frames_(frames),
      seed_(seed),
      fingerprint_(std::move(fingerprint)),
      counts_(std::move(counts)) {
  if (width < 1 || height < 1) throw DomainError(kModule, "frame dimensions must be positive");
  if (counts_.size() != pixels() * frames_) {
    throw DomainError(kModule, "frame counts do not match the stack dimensions");
  }
}

std::uint64_t frame_seed(std::uint64_t seed, std::uint64_t frame) noexcept {
  std::uint64_t z = seed + (frame + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

FrameStack synth_frames(const Distribution& dist4, const DetectorModel& detector,
                        const SynthOptions& options) {
  detector.validate();
  if (dist4.rank() != 4 || dist4.basis() != Basis::position) {
    throw DomainError(kModule, "frames are drawn from a 4D position distribution");
  }
  if (!dist4.is_normalized()) throw DomainError(kModule, "distribution must be normalised");
  if (!(options.mu_pairs >= 0.0) || !std::isfinite(options.mu_pairs)) {
    throw ConfigError(kModule, "mean pairs per frame must be non-negative");
  }
  if (options.frames < 1) throw ConfigError(kModule, "at least one frame is required");

  const std::size_t n = dist4.shape()[0];
  const std::size_t plane = n * n;
  const int width = detector.roi_width;
  const int height = detector.roi_height;
  std::vector<int> col(n), row(n);
  for (std::size_t k = 0; k < n; ++k) {
    col[k] = detector.pixel_of(dist4.coordinate(0, k), width);
    row[k] = detector.pixel_of(dist4.coordinate(1, k), height);
  }

  const auto v = dist4.values();
  std::vector<double> signal(plane, 0.0), idler(plane, 0.0);
  for (std::size_t s = 0; s < plane; ++s)
    for (std::size_t i = 0; i < plane; ++i) {
      signal[s] += v[s * plane + i];
      idler[i] += v[s * plane + i];
    }
  double lost_s = 0.0, lost_i = 0.0;
  for (std::size_t c = 0; c < plane; ++c) {
    if (col[c / n] < 0 || row[c % n] < 0) {
      lost_s += signal[c];
      lost_i += idler[c];
    }
  }
  if (std::max(lost_s, lost_i) > options.support_tolerance) {
    std::ostringstream msg;
    msg << "ROI " << width << " x " << height << " pixels is smaller than the distribution "
        << "support (" << std::max(lost_s, lost_i) << " of the mass falls outside)";
    throw ConfigError(kModule, msg.str());
  }

  const Alias marginal(signal.begin(), signal.end());
  std::vector<std::unique_ptr<Alias>> conditional(plane);
  auto conditional_for = [&](std::size_t s) -> const Alias& {
    if (!conditional[s]) {
      const double* first = v.data() + s * plane;
      conditional[s] = std::make_unique<Alias>(first, first + plane);
    }
    return *conditional[s];
  };

  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  std::vector<std::uint16_t> counts(pixels * options.frames, 0);
  const double dark_mean = detector.dark_rate * static_cast<double>(pixels);
  std::bernoulli_distribution detect(detector.quantum_efficiency);

  for (std::size_t f = 0; f < options.frames; ++f) {
    std::mt19937_64 rng(frame_seed(options.seed, f));
    const std::size_t base = f * pixels;
    auto record = [&](std::size_t node) {
      const int c = col[node / n];
      const int r = row[node % n];
      if (c < 0 || r < 0) return;
      if (detect(rng)) bump(counts, base + static_cast<std::size_t>(r) * width + c);
    };
    const long pairs =
        options.mu_pairs > 0.0 ? std::poisson_distribution<long>(options.mu_pairs)(rng) : 0;
    for (long k = 0; k < pairs; ++k) {
      const std::size_t s = marginal(rng);
      const std::size_t i = conditional_for(s)(rng);
      record(s);
      record(i);
    }
    if (dark_mean > 0.0) {
      const long dark = std::poisson_distribution<long>(dark_mean)(rng);
      std::uniform_int_distribution<std::size_t> where(0, pixels - 1);
      for (long k = 0; k < dark; ++k) bump(counts, base + where(rng));
    }
  }
  return FrameStack(width, height, options.frames, options.seed, options.fingerprint,
                    std::move(counts));
}

CoincidenceMap coincidence_map(const FrameStack& stack, const Reduction& reduction) {
  const std::size_t frames = stack.frames();
  if (frames < 2) throw ConfigError(kModule, "coincidence estimation needs at least two frames");
  const int width = stack.width();
  const int height = stack.height();

  if (std::holds_alternative<XPairs>(reduction)) {
    const auto w = static_cast<std::size_t>(width);
    std::vector<std::int64_t> reduced(frames * w, 0);
    for (std::size_t f = 0; f < frames; ++f)
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) reduced[f * w + c] += stack.at(f, r, c);

    Accumulator acc(w * w);
    for (std::size_t f = 0; f < frames; ++f) {
      const std::int64_t* now = &reduced[f * w];
      const std::int64_t* next = &reduced[((f + 1) % frames) * w];
      for (std::size_t p = 0; p < w; ++p) {
        if (now[p] == 0) continue;
        for (std::size_t q = 0; q < w; ++q) {
          std::int64_t d = checked_mul(now[p], now[q] - next[q]);
          if (p == q) d -= now[p];
          if (d != 0) acc.add(p * w + q, d);
        }
      }
    }
    return acc.finish(w, w, frames);
  }

  const auto& fixed = std::get<ConditionalRow>(reduction);
  if (fixed.row < 0 || fixed.row >= height || fixed.col < 0 || fixed.col >= width) {
    throw ConfigError(kModule, "conditioning pixel lies outside the frame");
  }
  const std::size_t pixels = stack.pixels();
  const std::size_t q = static_cast<std::size_t>(fixed.row) * width + fixed.col;
  Accumulator acc(pixels);
  const auto& counts = stack.counts();
  for (std::size_t f = 0; f < frames; ++f) {
    const std::uint16_t* now = &counts[f * pixels];
    const std::int64_t nq = now[q];
    const std::int64_t nq_next = counts[((f + 1) % frames) * pixels + q];
    if (nq == nq_next && nq == 0) continue;
    for (std::size_t p = 0; p < pixels; ++p) {
      if (now[p] == 0) continue;
      std::int64_t d = checked_mul(now[p], nq - nq_next);
      if (p == q) d -= now[p];
      if (d != 0) acc.add(p, d);
    }
  }
  return acc.finish(static_cast<std::size_t>(height), static_cast<std::size_t>(width), frames);
}

std::vector<double> project_joint_to_pixels(const Distribution& joint2,
                                            const DetectorModel& detector) {
  detector.validate();
  if (joint2.rank() != 2) throw DomainError(kModule, "expected a 2D joint distribution");
  const auto w = static_cast<std::size_t>(detector.roi_width);
  std::vector<double> out(w * w, 0.0);
  for (std::size_t r = 0; r < joint2.shape()[0]; ++r) {
    const int pr = detector.pixel_of(joint2.coordinate(0, r), detector.roi_width);
    if (pr < 0) continue;
    for (std::size_t c = 0; c < joint2.shape()[1]; ++c) {
      const int pc = detector.pixel_of(joint2.coordinate(1, c), detector.roi_width);
      if (pc < 0) continue;
      out[static_cast<std::size_t>(pr) * w + pc] += joint2(r, c);
    }
  }
  return out;
}

}  // namespace spdc
