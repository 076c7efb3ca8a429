#include "spdc/direct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {
namespace {

constexpr const char* kModule = "fields";

// Half-width, in grid steps, of the band |q_s + q_i| where the pump envelope
// is above the cut-off.
int pump_band(const MomentumGrid4& grid, const TwoPhotonSource& source, double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) {
    throw ConfigError(kModule, "pump cut-off must lie in (0, 1)");
  }
  const double qcut = 2.0 * std::sqrt(std::log(1.0 / cutoff)) / source.pump().waist;
  return static_cast<int>(std::ceil(qcut / grid.dq()));
}

void check_boundary_mass(double fraction, const DirectOptions& options) {
  if (fraction > options.boundary_mass_tolerance) {
    std::ostringstream msg;
    msg << "support truncated: " << fraction << " of the momentum probability lies on the grid "
        << "boundary (limit " << options.boundary_mass_tolerance
        << "); increase the momentum extent";
    throw ConfigError(kModule, msg.str());
  }
}

void check_grid(const MomentumGrid4& grid, const TwoPhotonSource& source) {
  const double q = std::max(std::abs(grid.q(0)), std::abs(grid.q(grid.n() - 1)));
  source.geometry().check_paraxial({q, q});
}

}  // namespace

AxisJoints averaged_joints_direct(const MomentumGrid4& grid, const TwoPhotonSource& source,
                                  double z, TransverseAxis axis, const DirectOptions& options) {
  check_grid(grid, source);
  const int n = grid.n();
  const int band = pump_band(grid, source, options.pump_cutoff);
  const auto& g = source.geometry();
  const bool keep_x = axis == TransverseAxis::x;

  std::vector<double> q(n);
  std::vector<Complex> phase_s(n), phase_i(n);
  for (int k = 0; k < n; ++k) {
    q[k] = grid.q(k);
    phase_s[k] = std::polar(1.0, -q[k] * q[k] * z / (2.0 * g.signal_wavenumber()));
    phase_i[k] = std::polar(1.0, -q[k] * q[k] * z / (2.0 * g.idler_wavenumber()));
  }

  const auto nn = static_cast<std::size_t>(n) * n;
  // Contributions of a summed pair and of its images under the symmetries of
  // the amplitude: exchange (a_s, a_i) -> (a_i, a_s) transposes the kept
  // block; for the x joints the reflection (a_s, a_i) -> (N - a_s, N - a_i)
  // leaves it unchanged. One evaluation per orbit.
  std::vector<double> pos(nn, 0.0), mom(nn, 0.0), pos_t(nn, 0.0), mom_t(nn, 0.0);
  ComplexBuffer buffer(nn);
  std::vector<double> block(nn);
  const fft::Centered2D transform(n, n, fft::Sign::backward);

  using Pair = std::pair<int, int>;
  auto in_range = [&](Pair p) { return p.first >= 0 && p.first < n && p.second >= 0 && p.second < n; };

  for (int as = 0; as < n; ++as) {
    const int lo = std::max(0, n - as - band);
    const int hi = std::min(n - 1, n - as + band);
    for (int ai = lo; ai <= hi; ++ai) {
      const Pair self{as, ai};
      Pair images[4] = {self, {ai, as}, {-1, -1}, {-1, -1}};
      if (keep_x && as > 0 && ai > 0) {
        images[2] = {n - as, n - ai};
        images[3] = {n - ai, n - as};
      }
      bool representative = true;
      for (const auto& e : images) {
        if (in_range(e) && e < self) representative = false;
      }
      if (!representative) continue;
      double same = 0.0;
      double transposed = 0.0;
      for (int k = 0; k < 4; ++k) {
        const auto& e = images[k];
        if (!in_range(e)) continue;
        bool seen = false;
        for (int j = 0; j < k; ++j) seen = seen || images[j] == e;
        if (seen) continue;
        (k == 0 || k == 2 ? same : transposed) += 1.0;
      }

      std::fill(buffer.begin(), buffer.end(), Complex{});
      bool any = false;
      for (int ks = 0; ks < n; ++ks) {
        const int klo = std::max(0, n - ks - band);
        const int khi = std::min(n - 1, n - ks + band);
        for (int ki = klo; ki <= khi; ++ki) {
          const Complex a = keep_x ? source.amplitude(q[ks], q[as], q[ki], q[ai])
                                   : source.amplitude(q[as], q[ks], q[ai], q[ki]);
          const double p = std::norm(a);
          if (p == 0.0) continue;
          any = true;
          const std::size_t cell = static_cast<std::size_t>(ks) * n + ki;
          if (same > 0.0) mom[cell] += same * p;
          if (transposed > 0.0) mom_t[cell] += transposed * p;
          buffer[cell] = a * (phase_s[ks] * phase_i[ki]);
        }
      }
      if (!any) continue;
      transform.execute(buffer);
      for (std::size_t c = 0; c < nn; ++c) block[c] = std::norm(buffer[c]);
      if (same > 0.0) {
        for (std::size_t c = 0; c < nn; ++c) pos[c] += same * block[c];
      }
      if (transposed > 0.0) {
        for (std::size_t c = 0; c < nn; ++c) pos_t[c] += transposed * block[c];
      }
    }
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const std::size_t rc = static_cast<std::size_t>(r) * n + c;
      const std::size_t cr = static_cast<std::size_t>(c) * n + r;
      pos[rc] += pos_t[cr];
      mom[rc] += mom_t[cr];
    }

  double total = 0.0;
  double edge = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double p = mom[static_cast<std::size_t>(r) * n + c];
      total += p;
      if (r == 0 || c == 0 || r == n - 1 || c == n - 1) edge += p;
    }
  if (!(total > 0.0)) throw DomainError(kModule, "amplitude vanishes on the grid");
  const double boundary = edge / total;
  check_boundary_mass(boundary, options);

  const char* s_name = keep_x ? "x_s" : "y_s";
  const char* i_name = keep_x ? "x_i" : "y_i";
  const char* qs_name = keep_x ? "q_xs" : "q_ys";
  const char* qi_name = keep_x ? "q_xi" : "q_yi";
  const auto un = static_cast<std::size_t>(n);
  return AxisJoints{
      Distribution({un, un}, {{s_name, grid.dx(), "m"}, {i_name, grid.dx(), "m"}},
                   Basis::position, std::move(pos), true),
      Distribution({un, un}, {{qs_name, grid.dq(), "rad/m"}, {qi_name, grid.dq(), "rad/m"}},
                   Basis::momentum, std::move(mom), true),
      boundary};
}

Distribution conditional_position_direct(const MomentumGrid4& grid,
                                         const TwoPhotonSource& source, double z,
                                         TransversePoint rho_i0, const DirectOptions& options) {
  check_grid(grid, source);
  const int n = grid.n();
  const int band = pump_band(grid, source, options.pump_cutoff);
  const auto& g = source.geometry();

  auto node = [&](double coord) {
    const double k = std::round(coord / grid.dx()) + n / 2;
    if (k < 0.0 || k >= n) throw DomainError(kModule, "conditioning point lies outside the grid");
    return static_cast<int>(k);
  };
  const int mx = node(rho_i0.x) - n / 2;
  const int my = node(rho_i0.y) - n / 2;

  std::vector<double> q(n);
  std::vector<Complex> phase_s(n), phase_i(n), root(n);
  for (int k = 0; k < n; ++k) {
    q[k] = grid.q(k);
    phase_s[k] = std::polar(1.0, -q[k] * q[k] * z / (2.0 * g.signal_wavenumber()));
    phase_i[k] = std::polar(1.0, -q[k] * q[k] * z / (2.0 * g.idler_wavenumber()));
    root[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
  }
  // exp(i q_i x_m) on the grid is exp(2 pi i (k - N/2)(m - N/2) / N); the
  // exponent is reduced mod N so the kernel is exact.
  auto kernel = [&](int k, int m) {
    long long e = static_cast<long long>(k - n / 2) * m;
    e %= n;
    if (e < 0) e += n;
    return root[static_cast<std::size_t>(e)];
  };
  std::vector<Complex> kx(n), ky(n);
  for (int k = 0; k < n; ++k) {
    kx[k] = phase_i[k] * kernel(k, mx);
    ky[k] = phase_i[k] * kernel(k, my);
  }

  const auto nn = static_cast<std::size_t>(n) * n;
  ComplexBuffer buffer(nn);
  double norm = 0.0;
  double edge = 0.0;
  for (int sx = 0; sx < n; ++sx) {
    const int xlo = std::max(0, n - sx - band);
    const int xhi = std::min(n - 1, n - sx + band);
    for (int sy = 0; sy < n; ++sy) {
      const int ylo = std::max(0, n - sy - band);
      const int yhi = std::min(n - 1, n - sy + band);
      Complex acc{};
      double mass = 0.0;
      for (int ix = xlo; ix <= xhi; ++ix) {
        Complex row{};
        for (int iy = ylo; iy <= yhi; ++iy) {
          const Complex a = source.amplitude(q[sx], q[sy], q[ix], q[iy]);
          mass += std::norm(a);
          row += a * ky[iy];
        }
        acc += row * kx[ix];
      }
      norm += mass;
      if (sx == 0 || sy == 0 || sx == n - 1 || sy == n - 1) edge += mass;
      buffer[static_cast<std::size_t>(sx) * n + sy] = acc * (phase_s[sx] * phase_s[sy]);
    }
  }
  if (!(norm > 0.0)) throw DomainError(kModule, "amplitude vanishes on the grid");
  check_boundary_mass(edge / norm, options);

  const fft::Centered2D transform(n, n, fft::Sign::backward);
  transform.execute(buffer);
  std::vector<double> p(nn);
  double slice = 0.0;
  for (std::size_t c = 0; c < nn; ++c) {
    p[c] = std::norm(buffer[c]);
    slice += p[c];
  }
  // Unscaled DFT units: the full position array would hold N^4 * norm.
  if (!(slice >= 1e-12 * norm * static_cast<double>(nn) * static_cast<double>(nn))) {
    throw DomainError(kModule, "degenerate conditioning: the idler slice carries no probability");
  }
  const auto un = static_cast<std::size_t>(n);
  return Distribution({un, un}, {{"x_s", grid.dx(), "m"}, {"y_s", grid.dx(), "m"}},
                      Basis::position, std::move(p), true);
}

}  // namespace spdc
