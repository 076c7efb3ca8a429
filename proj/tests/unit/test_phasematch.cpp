#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spdc/errors.hpp"
#include "spdc/phasematch.hpp"
#include "support.hpp"

using namespace spdc;

TEST_SUITE("phasematch") {
  TEST_CASE("single-crystal function at special mismatches") {
    const double L = 5e-3;
    const Complex at_zero = phi_single_from_mismatch(0.0, L);
    CHECK(at_zero.real() == 1.0);
    CHECK(at_zero.imag() == 0.0);
    const Complex at_node = phi_single_from_mismatch(2.0 * std::numbers::pi / L, L);
    CHECK(std::abs(at_node) < 1e-15);
  }

  TEST_CASE("single-crystal phase is half the mismatch phase, modulo pi") {
    const double L = 5e-3;
    for (int k = 1; k < 400; ++k) {
      const double dk = (k - 200) * 37.0;
      const Complex phi = phi_single_from_mismatch(dk, L);
      if (std::abs(phi) < 1e-12) continue;
      double diff = std::arg(phi) - 0.5 * dk * L;
      diff = std::remainder(diff, std::numbers::pi);
      CHECK(std::abs(diff) < 1e-12);
    }
  }

  TEST_CASE("magnitudes are bounded by one and even in the mismatch") {
    for (int k = -1000; k <= 1000; ++k) {
      const double dk = k * 11.3;
      const Complex s = phi_single_from_mismatch(dk, 5e-3);
      const double d = phi_double_from_mismatch(dk, 1e-3, 4e-3);
      CHECK(std::abs(s) <= 1.0);
      CHECK(std::abs(d) <= 1.0);
      CHECK(std::abs(s) == std::abs(phi_single_from_mismatch(-dk, 5e-3)));
      CHECK(d == phi_double_from_mismatch(-dk, 1e-3, 4e-3));
    }
    CHECK(phi_double_from_mismatch(0.0, 1e-3, 2e-3) == 1.0);
  }

  TEST_CASE("touching crystals merge into one of twice the length") {
    const double L = 1e-3;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double dk = -2e4 + 40.0 * k + 0.123;
      const double x = dk * L;
      const double merged = std::abs(std::sin(x) / x);
      worst = std::max(worst, std::abs(std::abs(phi_double_from_mismatch(dk, L, 0.0)) - merged));
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("sinc is continuous across the series switch") {
    for (double x : {0.99e-4, 1.0e-4, 1.01e-4}) {
      CHECK(sinc(x) == doctest::Approx(std::sin(x) / x).epsilon(1e-15));
    }
    CHECK(sinc(0.0) == 1.0);
  }

  TEST_CASE("amplitude at the origin for the collinear angle is one") {
    const auto model = SellmeierModel::bbo();
    const double theta = collinear_angle(model, 355e-9, 710e-9);
    CrystalSetup setup;
    setup.theta_p = theta;
    const TwoPhotonSource source(model, PumpSpec{}, setup);
    const Complex a = source.momentum_amplitude({0.0, 0.0}, {0.0, 0.0});
    CHECK(std::abs(a - Complex(1.0, 0.0)) < 1e-9);
  }

  TEST_CASE("amplitude is exactly symmetric under photon exchange") {
    for (const auto& source : {test::single_source(32.96), test::double_source(32.93, 1e-3, 4e-3)}) {
      for (int k = 0; k < 100; ++k) {
        const TransverseMomentum a{std::sin(k * 1.7) * 3e4, std::cos(k * 0.9) * 2e4};
        const TransverseMomentum b{std::cos(k * 2.3) * 3e4, std::sin(k * 0.4) * 4e4};
        CHECK(source.momentum_amplitude(a, b) == source.momentum_amplitude(b, a));
        CHECK(source.amplitude(a.x, a.y, b.x, b.y) == source.amplitude(b.x, b.y, a.x, a.y));
        const Complex hot = source.amplitude(a.x, a.y, b.x, b.y);
        const Complex ref = source.momentum_amplitude(a, b);
        CHECK(std::abs(hot - ref) <= 1e-13 * std::abs(ref));
      }
    }
  }

  TEST_CASE("pump envelope suppresses large total momentum") {
    const auto source = test::single_source();
    const double w0 = source.pump().waist;
    const TransverseMomentum q{12.0 / w0, 0.0};
    CHECK(std::abs(source.momentum_amplitude(q, {0.0, 0.0})) < 1e-6);
  }

  TEST_CASE("double-crystal function is real") {
    const auto source = test::double_source();
    for (int k = 0; k < 50; ++k) {
      const TransverseMomentum a{k * 1e3, -k * 5e2};
      CHECK(source.phi({k * 7e2, 0.0}, a).imag() == 0.0);
    }
  }

  TEST_CASE("kind-specific functions reject the other kind") {
    CHECK_THROWS_AS(test::double_source().phi_single({}, {}), ConfigError);
    CHECK_THROWS_AS(test::single_source().phi_double({}, {}), ConfigError);
  }

  TEST_CASE("setup validation") {
    CrystalSetup bad;
    bad.theta_p = test::deg(32.9);
    bad.kind = SingleCrystal{0.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.kind = DoubleCrystal{1e-3, -1e-3};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.kind = DoubleCrystal{1e-3, 0.0};
    CHECK_NOTHROW(bad.validate());
    bad.theta_p = 2.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    PumpSpec pump;
    pump.waist = 0.0;
    CHECK_THROWS_AS(pump.validate(), ConfigError);
  }
}
