#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spdc/analysis.hpp"
#include "spdc/errors.hpp"
#include "spdc/fields.hpp"
#include "support.hpp"

using namespace spdc;

namespace {

FieldOptions loose() {
  FieldOptions o;
  o.truncation_tolerance = 1.0;
  return o;
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

// Product distribution p(s_x, s_y) q(i_x, i_y) on an n^4 grid.
Distribution separable(int n) {
  const auto nn = static_cast<std::size_t>(n) * n;
  std::vector<double> p(nn), q(nn), v(nn * nn);
  for (std::size_t k = 0; k < nn; ++k) {
    p[k] = 1.0 + std::sin(0.3 * k);
    q[k] = 1.5 + std::cos(0.7 * k);
  }
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t b = 0; b < nn; ++b) v[a * nn + b] = p[a] * q[b];
  const MomentumGrid4 grid(n, 1.0);
  const auto sz = static_cast<std::size_t>(n);
  return Distribution({sz, sz, sz, sz}, axes4(grid, Basis::position), Basis::position,
                      std::move(v), true);
}

}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("grid geometry") {
    const MomentumGrid4 g(16, 2.5e3);
    CHECK(g.dx() * g.dq() == doctest::Approx(2.0 * std::numbers::pi / 16).epsilon(1e-15));
    CHECK(g.q(8) == 0.0);
    CHECK(g.q(0) == doctest::Approx(-8 * 2.5e3));
    CHECK(g.q_max() == doctest::Approx(8 * 2.5e3));
    CHECK(g.size() == 65536u);
    CHECK_THROWS_AS(MomentumGrid4(4, 1.0), ConfigError);
    CHECK_THROWS_AS(MomentumGrid4(24, 1.0), ConfigError);
    CHECK_THROWS_AS(MomentumGrid4(16, 0.0), ConfigError);
  }

  TEST_CASE("auto extent combines pump and ring scales") {
    const auto source = test::single_source();
    const double w0 = source.pump().waist;
    const double ring = auto_extent(source, {0.0, 1.0});
    CHECK(auto_extent(source, {6.0, 0.0}) == doctest::Approx(6.0 / w0));
    CHECK(auto_extent(source, {6.0, 1.5}) == doctest::Approx(6.0 / w0 + 1.5 * ring));
    const auto& g = source.geometry();
    const double scale = 5e-3 * g.signal_wavelength() / (2.0 * std::numbers::pi * g.signal_index());
    CHECK(ring == doctest::Approx(std::sqrt(4.0 * std::numbers::pi / scale)));
    CHECK_THROWS_AS(auto_extent(source, {0.0, 0.0}), ConfigError);
  }

  TEST_CASE("amplitude is normalised, symmetric and peaked at the origin") {
    const auto model = SellmeierModel::bbo();
    const double theta_deg = collinear_angle(model, 355e-9, 710e-9) * 180.0 / std::numbers::pi;
    const auto source = test::single_source(theta_deg);
    const auto grid = auto_grid(16, source);
    const auto amp = build_amplitude(grid, source, loose());
    CHECK(amp.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(amp.basis() == Basis::momentum);
    CHECK(amp.z() == 0.0);

    std::size_t best = 0;
    const auto v = amp.values();
    for (std::size_t k = 1; k < v.size(); ++k)
      if (std::abs(v[k]) > std::abs(v[best])) best = k;
    CHECK(best == amp.index(8, 8, 8, 8));

    for (int a = 0; a < 16; a += 3)
      for (int b = 0; b < 16; b += 5)
        for (int c = 0; c < 16; c += 2)
          for (int d = 0; d < 16; d += 7) CHECK(amp.at(a, b, c, d) == amp.at(c, d, a, b));
  }

  TEST_CASE("truncated support is rejected") {
    const auto source = test::single_source(32.96);
    const auto grid = auto_grid(16, source, {1.0, 0.3});
    try {
      build_amplitude(grid, source);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("extent") != std::string::npos);
    }
  }

  TEST_CASE("default extent passes the truncation check for the angle set") {
    for (double theta : {32.90, 32.92, 32.94, 32.96, 32.98}) {
      const auto source = test::single_source(theta);
      CHECK_NOTHROW(build_amplitude(auto_grid(64, source), source));
    }
  }

  TEST_CASE("memory budget is enforced before allocation") {
    const auto source = test::single_source();
    FieldOptions small;
    small.memory_budget_bytes = 1 << 20;
    CHECK_THROWS_AS(build_amplitude(auto_grid(64, source), source, small), ResourceError);
    CHECK(amplitude_bytes(MomentumGrid4(64, 1.0)) == std::size_t{16} << 24);
  }

  TEST_CASE("propagation changes only the phase") {
    const auto source = test::single_source(32.94);
    const auto amp = build_amplitude(auto_grid(16, source), source, loose());
    const auto same = propagate(amp, 0.0);
    CHECK(max_abs_diff(same.values(), amp.values()) == 0.0);

    const auto far = propagate(amp, 5e-3);
    CHECK(far.z() == 5e-3);
    double worst = 0.0;
    for (std::size_t k = 0; k < amp.values().size(); ++k)
      worst = std::max(worst, std::abs(std::abs(far.values()[k]) - std::abs(amp.values()[k])));
    CHECK(worst <= 1e-14);

    const auto two_step = propagate(propagate(amp, 3e-3), 7e-3);
    const auto one_step = propagate(amp, 10e-3);
    CHECK(max_abs_diff(two_step.values(), one_step.values()) <= 1e-12);
  }

  TEST_CASE("position amplitude matches the literal quadrature on an 8-point grid") {
    const auto source = test::single_source(32.96);
    const auto grid = auto_grid(8, source);
    const double z = 5e-3;
    const auto amp = propagate(build_amplitude(grid, source, loose()), z);
    const auto pos = to_position(amp);

    const int n = 8;
    const double ks = source.geometry().signal_wavenumber();
    const double dq = grid.dq();
    const double pref = std::pow(dq / std::sqrt(2.0 * std::numbers::pi), 4);
    // Re-sample and re-normalise independently of build_amplitude.
    std::vector<Complex> a(grid.size());
    double sum = 0.0;
    std::size_t flat = 0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            const double qsx = (p - n / 2) * dq, qsy = (q - n / 2) * dq;
            const double qix = (r - n / 2) * dq, qiy = (s - n / 2) * dq;
            const Complex v = source.momentum_amplitude({qsx, qsy}, {qix, qiy});
            const double phase = -((qsx * qsx + qsy * qsy) + (qix * qix + qiy * qiy)) * z / (2.0 * ks);
            a[flat++] = v * std::polar(1.0, phase);
            sum += std::norm(v);
          }
    const double scale = 1.0 / std::sqrt(sum * std::pow(dq, 4));

    const double dx = 2.0 * std::numbers::pi / (n * dq);
    double worst = 0.0;
    double peak = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            const double xs = (p - n / 2) * dx, ys = (q - n / 2) * dx;
            const double xi = (r - n / 2) * dx, yi = (s - n / 2) * dx;
            Complex psi{};
            std::size_t f = 0;
            for (int a1 = 0; a1 < n; ++a1)
              for (int a2 = 0; a2 < n; ++a2)
                for (int a3 = 0; a3 < n; ++a3)
                  for (int a4 = 0; a4 < n; ++a4) {
                    const double ph = ((a1 - n / 2) * xs + (a2 - n / 2) * ys + (a3 - n / 2) * xi +
                                       (a4 - n / 2) * yi) * dq;
                    psi += a[f++] * std::polar(1.0, ph);
                  }
            psi *= pref * scale;
            const Complex got = pos.at(p, q, r, s);
            worst = std::max(worst, std::abs(got - psi));
            peak = std::max(peak, std::abs(psi));
          }
    CHECK(worst / peak <= 1e-9);
  }

  TEST_CASE("Parseval across the 4D transform") {
    for (double z : {0.0, 5e-3, 10e-3}) {
      const auto source = test::single_source(32.94);
      const auto amp = propagate(build_amplitude(auto_grid(16, source), source, loose()), z);
      const auto pos = to_position(amp);
      CHECK(pos.basis() == Basis::position);
      CHECK(std::abs(pos.total_probability() - amp.total_probability()) <= 1e-10);
    }
  }

  TEST_CASE("momentum distribution does not depend on z") {
    const auto source = test::single_source(32.96);
    const auto amp = build_amplitude(auto_grid(16, source), source, loose());
    const auto ref = momentum_pdf(amp);
    for (double z : {5e-3, 10e-3}) {
      const auto moved = momentum_pdf(propagate(amp, z));
      double worst = 0.0;
      for (std::size_t k = 0; k < ref.values().size(); ++k)
        worst = std::max(worst, std::abs(moved.values()[k] - ref.values()[k]));
      CHECK(worst <= 1e-12);
    }
  }

  TEST_CASE("Gaussian two-photon state has the closed-form single-photon width") {
    // A = exp(-(q_s + q_i)^2 w^2 / 4 - (q_s - q_i)^2 s^2 / 4) per axis gives
    // |psi|^2 ~ exp(-(x_s + x_i)^2 / 2w^2 - (x_s - x_i)^2 / 2s^2), so
    // var(x_s) = (w^2 + s^2) / 4.
    const int n = 32;
    const double w = 1e-4;
    const double s = 0.5e-4;
    const MomentumGrid4 grid(n, 0.5 / w);
    ComplexBuffer values(grid.size());
    auto f = [&](double a, double b) {
      return std::exp(-(a + b) * (a + b) * w * w / 4.0 - (a - b) * (a - b) * s * s / 4.0);
    };
    std::size_t flat = 0;
    double sum = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int t = 0; t < n; ++t) {
            const double v = f(grid.q(p), grid.q(r)) * f(grid.q(q), grid.q(t));
            values[flat++] = v;
            sum += v * v;
          }
    const double scale = 1.0 / std::sqrt(sum * std::pow(grid.dq(), 4));
    for (auto& v : values) v *= scale;
    const BiphotonAmplitude4 amp(grid, std::move(values), Basis::momentum, 0.0, 1e7, 1e7);
    const auto one = singles(position_pdf(to_position(amp)));
    double var = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) var += one(r, c) * grid.x(r) * grid.x(r);
    CHECK(test::rel_diff(var, (w * w + s * s) / 4.0) <= 1e-9);
  }

  TEST_CASE("reductions keep unit mass and exchange symmetry") {
    const auto source = test::single_source(32.96);
    const auto amp = propagate(build_amplitude(auto_grid(16, source), source, loose()), 5e-3);
    const auto pos = position_pdf(to_position(amp));
    for (const auto& d : {averaged_joint_x(pos), averaged_joint_y(pos), singles(pos),
                          conditional_position(pos)}) {
      CHECK(d.rank() == 2);
      CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
      for (double v : d.values()) CHECK(v >= 0.0);
    }
    const auto jx = averaged_joint_x(pos);
    for (std::size_t r = 0; r < 16; ++r)
      for (std::size_t c = 0; c < 16; ++c)
        CHECK(jx(r, c) == doctest::Approx(jx(c, r)).epsilon(1e-12));
    CHECK_THROWS_AS(position_pdf(amp), DomainError);
  }

  TEST_CASE("position joint concentrates on the diagonal at the collinear angle") {
    const auto source = test::single_source(32.9);
    const auto amp = propagate(build_amplitude(auto_grid(64, source), source), 5e-3);
    const auto jx = averaged_joint_x(position_pdf(to_position(amp)));
    double peak = 0.0;
    for (double v : jx.values()) peak = std::max(peak, v);
    for (std::size_t c = 0; c < 64; ++c) {
      std::size_t best = 0;
      for (std::size_t r = 1; r < 64; ++r)
        if (jx(r, c) > jx(best, c)) best = r;
      if (jx(best, c) < 0.1 * peak) continue;
      CHECK(std::abs(static_cast<long>(best) - static_cast<long>(c)) <= 1);
    }
  }

  TEST_CASE("momentum joint lies along the anti-diagonal") {
    const auto source = test::single_source(32.9);
    const auto amp = build_amplitude(auto_grid(64, source), source);
    const auto jq = averaged_joint_x(momentum_pdf(amp));
    CHECK(pearson_correlation(jq) < -0.9);
  }

  TEST_CASE("conditioning a product distribution returns the signal marginal") {
    const auto dist = separable(8);
    const auto cond = conditional_position(dist, {2.0, -1.0});
    const auto one = singles(dist);
    for (std::size_t k = 0; k < 64; ++k)
      CHECK(cond.values()[k] == doctest::Approx(one.values()[k]).epsilon(1e-12));
  }

  TEST_CASE("conditioning on an empty slice is a domain error") {
    const std::size_t n = 8;
    std::vector<double> v(n * n * n * n, 0.0);
    v[0] = 1.0;
    const MomentumGrid4 grid(8, 1.0);
    const Distribution dist({n, n, n, n}, axes4(grid, Basis::position), Basis::position,
                            std::move(v), true);
    CHECK_THROWS_AS(conditional_position(dist, {0.0, 0.0}), DomainError);
  }

  TEST_CASE("distribution validation") {
    const MomentumGrid4 grid(8, 1.0);
    const auto axes = axes4(grid, Basis::position);
    const std::vector<AxisInfo> two(axes.begin(), axes.begin() + 2);
    CHECK_THROWS_AS(Distribution({2, 2}, two, Basis::position, {1.0, -1.0, 0.0, 1.0}, false),
                    DomainError);
    CHECK_THROWS_AS(Distribution({2, 2}, two, Basis::position, {0.0, 0.0, 0.0, 0.0}, true),
                    DomainError);
    CHECK_THROWS_AS(Distribution({2, 2}, two, Basis::position, {1.0, NAN, 0.0, 1.0}, false),
                    DomainError);
    const Distribution d({2, 2}, two, Basis::position, {1.0, 1.0, 1.0, 1.0}, true);
    CHECK(d.is_normalized());
    CHECK(d(1, 1) == 0.25);
  }
}
