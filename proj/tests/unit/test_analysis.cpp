#include <doctest.h>

#include <cmath>

#include "spdc/analysis.hpp"

using namespace spdc;

namespace {

Distribution square(std::size_t n, std::vector<double> v) {
  const std::vector<AxisInfo> axes = {{"x_s", 1.0, "m"}, {"x_i", 1.0, "m"}};
  return Distribution({n, n}, axes, Basis::position, std::move(v), true);
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("radial profile of a ring peaks at its radius") {
    const std::size_t n = 32;
    std::vector<double> v(n * n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        const double rad = std::hypot(double(r) - 16.0, double(c) - 16.0);
        v[r * n + c] = std::exp(-(rad - 7.0) * (rad - 7.0));
      }
    const auto profile = radial_profile(square(n, v));
    CHECK(profile.size() == 16);
    CHECK(argmax(profile) == 7);
    CHECK(count_local_maxima(profile) == 1);
  }

  TEST_CASE("local maxima counting rules") {
    CHECK(count_local_maxima({3.0, 1.0, 2.0, 1.0}) == 2);
    CHECK(count_local_maxima({1.0, 2.0, 3.0}) == 0);
    CHECK(count_local_maxima({1.0, 2.0, 2.0, 1.0}) == 0);
    CHECK(count_local_maxima({5.0, 1.0, 1.2, 1.0, 3.0, 0.0}, 0.5) == 2);
    CHECK(argmax({1.0, 4.0, 4.0}) == 1);
  }

  TEST_CASE("Pearson correlation of diagonal and anti-diagonal masses") {
    const std::size_t n = 8;
    std::vector<double> diag(n * n, 0.0), anti(n * n, 0.0), flat(n * n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      diag[k * n + k] = 1.0;
      anti[k * n + (n - 1 - k)] = 1.0;
    }
    CHECK(pearson_correlation(square(n, diag)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pearson_correlation(square(n, anti)) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(pearson_correlation(square(n, flat))) < 1e-14);
  }

  TEST_CASE("band masses") {
    const std::size_t n = 8;
    std::vector<double> diag(n * n, 0.0), flat(n * n, 1.0);
    for (std::size_t k = 0; k < n; ++k) diag[k * n + k] = 1.0;
    CHECK(diagonal_band_mass(square(n, diag), 0) == doctest::Approx(1.0));
    CHECK(diagonal_band_mass(square(n, diag), 1, true) == doctest::Approx(1.0 / 8.0));
    CHECK(diagonal_band_mass(square(n, flat), 1) == doctest::Approx(22.0 / 64.0));
  }
}
