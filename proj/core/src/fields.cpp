#include "spdc/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {
namespace {

constexpr const char* kModule = "fields";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_momentum(const BiphotonAmplitude4& amp, const char* op) {
  if (amp.basis() != Basis::momentum) {
    throw DomainError(kModule, std::string(op) + " requires a momentum-basis amplitude");
  }
}

void check_budget(std::size_t bytes, const FieldOptions& options, const char* op) {
  if (bytes > options.memory_budget_bytes) {
    std::ostringstream msg;
    msg << op << " needs about " << bytes / (1u << 20) << " MiB, over the "
        << options.memory_budget_bytes / (1u << 20) << " MiB memory budget; reduce N";
    throw ResourceError(kModule, msg.str());
  }
}

// Sums a 4D distribution over two axes, keeping the other two in order.
Distribution reduce4(const Distribution& dist4, std::size_t keep0, std::size_t keep1,
                     const char* op) {
  if (dist4.rank() != 4) throw DomainError(kModule, std::string(op) + " requires a 4D input");
  const auto& sh = dist4.shape();
  const auto v = dist4.values();
  std::vector<double> out(sh[keep0] * sh[keep1], 0.0);
  std::size_t idx[4];
  std::size_t flat = 0;
  for (idx[0] = 0; idx[0] < sh[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < sh[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < sh[2]; ++idx[2])
        for (idx[3] = 0; idx[3] < sh[3]; ++idx[3]) {
          out[idx[keep0] * sh[keep1] + idx[keep1]] += v[flat++];
        }
  return Distribution({sh[keep0], sh[keep1]}, {dist4.axes()[keep0], dist4.axes()[keep1]},
                      dist4.basis(), std::move(out), true);
}

}  // namespace

MomentumGrid4::MomentumGrid4(int n, double dq) : n_(n), dq_(dq) {
  if (n < 8 || !is_power_of_two(n)) {
    throw ConfigError(kModule, "grid N must be a power of two >= 8 (got " + std::to_string(n) + ")");
  }
  if (!(dq > 0.0) || !std::isfinite(dq)) throw ConfigError(kModule, "grid dq must be positive");
}

double MomentumGrid4::dx() const noexcept { return kTwoPi / (n_ * dq_); }

std::size_t MomentumGrid4::size() const noexcept {
  const auto n = static_cast<std::size_t>(n_);
  return n * n * n * n;
}

double auto_extent(const TwoPhotonSource& source, const ExtentPolicy& policy) {
  if (!(policy.pump_factor >= 0.0) || !(policy.phase_matching_factor >= 0.0) ||
      !(policy.pump_factor + policy.phase_matching_factor > 0.0)) {
    throw ConfigError(kModule, "extent factors must be non-negative and not both zero");
  }
  const auto& g = source.geometry();
  const double length = source.setup().crystal_length();
  const double scale = length * g.signal_wavelength() / (kTwoPi * g.signal_index());
  return policy.pump_factor / source.pump().waist +
         policy.phase_matching_factor * std::sqrt(4.0 * std::numbers::pi / scale);
}

MomentumGrid4 auto_grid(int n, const TwoPhotonSource& source, const ExtentPolicy& policy) {
  if (n < 8 || !is_power_of_two(n)) {
    throw ConfigError(kModule, "grid N must be a power of two >= 8 (got " + std::to_string(n) + ")");
  }
  return MomentumGrid4(n, 2.0 * auto_extent(source, policy) / n);
}

std::size_t amplitude_bytes(const MomentumGrid4& grid) noexcept {
  return grid.size() * sizeof(Complex);
}

BiphotonAmplitude4::BiphotonAmplitude4(MomentumGrid4 grid, ComplexBuffer values, Basis basis,
                                       double z, double k_signal, double k_idler)
    : grid_(grid),
      values_(std::move(values)),
      basis_(basis),
      z_(z),
      k_signal_(k_signal),
      k_idler_(k_idler) {
  if (values_.size() != grid_.size()) {
    throw DomainError(kModule, "amplitude array does not match its grid");
  }
}

std::size_t BiphotonAmplitude4::index(int sx, int sy, int ix, int iy) const noexcept {
  const auto n = static_cast<std::size_t>(grid_.n());
  return ((static_cast<std::size_t>(sx) * n + sy) * n + ix) * n + iy;
}

double BiphotonAmplitude4::total_probability() const noexcept {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  const double step = basis_ == Basis::momentum ? grid_.dq() : grid_.dx();
  return sum * std::pow(step, 4);
}

BiphotonAmplitude4 build_amplitude(const MomentumGrid4& grid, const TwoPhotonSource& source,
                                   const FieldOptions& options) {
  check_budget(amplitude_bytes(grid), options, "build_amplitude");
  const auto& g = source.geometry();
  const double qmax_sample = std::max(std::abs(grid.q(0)), std::abs(grid.q(grid.n() - 1)));
  g.check_paraxial({qmax_sample, qmax_sample});

  const int n = grid.n();
  std::vector<double> q(n);
  for (int k = 0; k < n; ++k) q[k] = grid.q(k);

  ComplexBuffer values(grid.size());
  std::size_t flat = 0;
  double peak = 0.0;
  double edge = 0.0;
  double sum = 0.0;
  for (int sx = 0; sx < n; ++sx)
    for (int sy = 0; sy < n; ++sy)
      for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
          const Complex a = source.amplitude(q[sx], q[sy], q[ix], q[iy]);
          values[flat++] = a;
          const double m = std::abs(a);
          peak = std::max(peak, m);
          const bool boundary = sx == 0 || sy == 0 || ix == 0 || iy == 0 || sx == n - 1 ||
                                sy == n - 1 || ix == n - 1 || iy == n - 1;
          if (boundary) edge += std::norm(a);
          sum += std::norm(a);
        }
  if (!(peak > 0.0)) throw DomainError(kModule, "amplitude vanishes on the grid");
  if (edge > options.truncation_tolerance * sum) {
    std::ostringstream msg;
    msg << "support truncated: boundary shell holds " << edge / sum
        << " of the probability (limit " << options.truncation_tolerance
        << "); increase the momentum extent";
    throw ConfigError(kModule, msg.str());
  }
  const double scale = 1.0 / std::sqrt(sum * std::pow(grid.dq(), 4));
  for (auto& v : values) v *= scale;
  return BiphotonAmplitude4(grid, std::move(values), Basis::momentum, 0.0, g.signal_wavenumber(),
                            g.idler_wavenumber());
}

BiphotonAmplitude4 propagate(const BiphotonAmplitude4& amp, double z) {
  require_momentum(amp, "propagate");
  const auto& grid = amp.grid();
  const int n = grid.n();
  std::vector<Complex> ps(n), pi(n);
  for (int k = 0; k < n; ++k) {
    const double q2 = grid.q(k) * grid.q(k);
    ps[k] = std::polar(1.0, -q2 * z / (2.0 * amp.k_signal()));
    pi[k] = std::polar(1.0, -q2 * z / (2.0 * amp.k_idler()));
  }
  ComplexBuffer out(amp.values().begin(), amp.values().end());
  std::size_t flat = 0;
  for (int sx = 0; sx < n; ++sx)
    for (int sy = 0; sy < n; ++sy) {
      const Complex s = ps[sx] * ps[sy];
      for (int ix = 0; ix < n; ++ix) {
        const Complex si = s * pi[ix];
        for (int iy = 0; iy < n; ++iy) out[flat++] *= si * pi[iy];
      }
    }
  return BiphotonAmplitude4(grid, std::move(out), Basis::momentum, amp.z() + z, amp.k_signal(),
                            amp.k_idler());
}

BiphotonAmplitude4 to_position(const BiphotonAmplitude4& amp, const FieldOptions& options) {
  require_momentum(amp, "to_position");
  check_budget(2 * amplitude_bytes(amp.grid()), options, "to_position");
  ComplexBuffer out(amp.values().begin(), amp.values().end());
  const auto n = static_cast<std::size_t>(amp.grid().n());
  const std::size_t shape[4] = {n, n, n, n};
  const std::size_t axes[4] = {0, 1, 2, 3};
  const double scale = std::pow(amp.grid().dq() / std::sqrt(kTwoPi), 4);
  fft::centered_transform(out, shape, axes, fft::Sign::backward, scale);
  return BiphotonAmplitude4(amp.grid(), std::move(out), Basis::position, amp.z(), amp.k_signal(),
                            amp.k_idler());
}

Distribution::Distribution(std::vector<std::size_t> shape, std::vector<AxisInfo> axes,
                           Basis basis, std::vector<double> values, bool normalize)
    : shape_(std::move(shape)), axes_(std::move(axes)), basis_(basis), values_(std::move(values)) {
  if (shape_.size() != axes_.size()) throw DomainError(kModule, "axis metadata/shape mismatch");
  std::size_t total = 1;
  for (auto s : shape_) total *= s;
  if (total != values_.size() || total == 0) {
    throw DomainError(kModule, "distribution values do not match the shape");
  }
  double sum = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError(kModule, "distribution entries must be finite and non-negative");
    }
    sum += v;
  }
  if (normalize) {
    if (!(sum > 0.0)) throw DomainError(kModule, "cannot normalise an all-zero distribution");
    for (double& v : values_) v /= sum;
    normalized_ = true;
  } else {
    normalized_ = std::abs(sum - 1.0) <= 1e-10;
  }
}

double Distribution::total() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum;
}

double Distribution::coordinate(std::size_t a, std::size_t k) const noexcept {
  return (static_cast<double>(k) - static_cast<double>(shape_[a] / 2)) * axes_[a].bin_width;
}

std::vector<AxisInfo> axes4(const MomentumGrid4& grid, Basis basis) {
  if (basis == Basis::momentum) {
    return {{"q_xs", grid.dq(), "rad/m"},
            {"q_ys", grid.dq(), "rad/m"},
            {"q_xi", grid.dq(), "rad/m"},
            {"q_yi", grid.dq(), "rad/m"}};
  }
  return {{"x_s", grid.dx(), "m"}, {"y_s", grid.dx(), "m"}, {"x_i", grid.dx(), "m"},
          {"y_i", grid.dx(), "m"}};
}

namespace {
Distribution squared_modulus(const BiphotonAmplitude4& amp) {
  std::vector<double> p(amp.values().size());
  std::transform(amp.values().begin(), amp.values().end(), p.begin(),
                 [](const Complex& v) { return std::norm(v); });
  const auto n = static_cast<std::size_t>(amp.grid().n());
  return Distribution({n, n, n, n}, axes4(amp.grid(), amp.basis()), amp.basis(), std::move(p),
                      true);
}
}  // namespace

Distribution momentum_pdf(const BiphotonAmplitude4& amp) {
  require_momentum(amp, "momentum_pdf");
  return squared_modulus(amp);
}

Distribution position_pdf(const BiphotonAmplitude4& amp) {
  if (amp.basis() != Basis::position) {
    throw DomainError(kModule, "position_pdf requires a position-basis amplitude");
  }
  return squared_modulus(amp);
}

Distribution averaged_joint_x(const Distribution& dist4) {
  return reduce4(dist4, 0, 2, "averaged_joint_x");
}

Distribution averaged_joint_y(const Distribution& dist4) {
  return reduce4(dist4, 1, 3, "averaged_joint_y");
}

Distribution singles(const Distribution& dist4) { return reduce4(dist4, 0, 1, "singles"); }

Distribution conditional_position(const Distribution& dist4, TransversePoint rho_i0) {
  if (dist4.rank() != 4) throw DomainError(kModule, "conditional_position requires a 4D input");
  const auto& sh = dist4.shape();
  auto node = [&](std::size_t axis, double coord) {
    const double k = std::round(coord / dist4.axes()[axis].bin_width) +
                     static_cast<double>(sh[axis] / 2);
    if (k < 0.0 || k >= static_cast<double>(sh[axis])) {
      throw DomainError(kModule, "conditioning point lies outside the grid");
    }
    return static_cast<std::size_t>(k);
  };
  const std::size_t ix = node(2, rho_i0.x);
  const std::size_t iy = node(3, rho_i0.y);
  const auto v = dist4.values();
  std::vector<double> slice(sh[0] * sh[1]);
  double slice_sum = 0.0;
  for (std::size_t sx = 0; sx < sh[0]; ++sx)
    for (std::size_t sy = 0; sy < sh[1]; ++sy) {
      const double p = v[((sx * sh[1] + sy) * sh[2] + ix) * sh[3] + iy];
      slice[sx * sh[1] + sy] = p;
      slice_sum += p;
    }
  if (!(slice_sum >= 1e-12 * dist4.total())) {
    throw DomainError(kModule, "degenerate conditioning: the idler slice carries no probability");
  }
  return Distribution({sh[0], sh[1]}, {dist4.axes()[0], dist4.axes()[1]}, dist4.basis(),
                      std::move(slice), true);
}

}  // namespace spdc
