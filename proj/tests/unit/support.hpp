#pragma once

#include <cmath>
#include <numbers>

#include "spdc/phasematch.hpp"

namespace test {

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

inline spdc::TwoPhotonSource single_source(double theta_deg = 32.9, double length = 5e-3) {
  spdc::CrystalSetup setup;
  setup.kind = spdc::SingleCrystal{length};
  setup.theta_p = deg(theta_deg);
  return spdc::TwoPhotonSource(spdc::SellmeierModel::bbo(), spdc::PumpSpec{}, setup);
}

inline spdc::TwoPhotonSource double_source(double theta_deg = 32.93, double length = 1e-3,
                                           double gap = 2e-3) {
  spdc::CrystalSetup setup;
  setup.kind = spdc::DoubleCrystal{length, gap};
  setup.theta_p = deg(theta_deg);
  return spdc::TwoPhotonSource(spdc::SellmeierModel::bbo(), spdc::PumpSpec{}, setup);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace test
