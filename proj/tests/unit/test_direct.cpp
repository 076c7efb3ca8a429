#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spdc/direct.hpp"
#include "spdc/errors.hpp"
#include "support.hpp"

using namespace spdc;

namespace {

DirectOptions exact() {
  DirectOptions o;
  o.pump_cutoff = 1e-300;
  o.boundary_mass_tolerance = 1.0;
  return o;
}

FieldOptions loose() {
  FieldOptions o;
  o.truncation_tolerance = 1.0;
  return o;
}

double max_diff(const Distribution& a, const Distribution& b) {
  REQUIRE(a.shape() == b.shape());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k)
    worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
  return worst;
}

}  // namespace

TEST_SUITE("direct") {
  TEST_CASE("averaged joints agree with the 4D route") {
    for (const auto& source : {test::single_source(32.96), test::double_source(32.93, 1e-3, 4e-3)}) {
      const auto grid = auto_grid(16, source);
      const double z = source.setup().is_double() ? 7.5e-3 : 5e-3;
      const auto amp = propagate(build_amplitude(grid, source, loose()), z);
      const auto pos = position_pdf(to_position(amp));
      const auto mom = momentum_pdf(amp);

      const auto jx = averaged_joints_direct(grid, source, z, TransverseAxis::x, exact());
      CHECK(max_diff(jx.position, averaged_joint_x(pos)) <= 1e-13);
      CHECK(max_diff(jx.momentum, averaged_joint_x(mom)) <= 1e-13);
      const auto jy = averaged_joints_direct(grid, source, z, TransverseAxis::y, exact());
      CHECK(max_diff(jy.position, averaged_joint_y(pos)) <= 1e-13);
      CHECK(max_diff(jy.momentum, averaged_joint_y(mom)) <= 1e-13);
      CHECK(jx.position.basis() == Basis::position);
      CHECK(jx.momentum.basis() == Basis::momentum);
    }
  }

  TEST_CASE("conditional slice agrees with the 4D route") {
    const auto source = test::single_source(32.96);
    const auto grid = auto_grid(16, source);
    const double z = 5e-3;
    const auto pos = position_pdf(to_position(propagate(build_amplitude(grid, source, loose()), z)));
    for (const TransversePoint p : {TransversePoint{0.0, 0.0},
                                    TransversePoint{2.2 * grid.dx(), -0.9 * grid.dx()}}) {
      const auto direct = conditional_position_direct(grid, source, z, p, exact());
      CHECK(max_diff(direct, conditional_position(pos, p)) <= 1e-13);
    }
  }

  TEST_CASE("pump cut-off changes the joints only at the cut-off level") {
    const auto source = test::single_source(32.94);
    const auto grid = auto_grid(32, source);
    DirectOptions cut;
    cut.boundary_mass_tolerance = 1.0;
    const auto a = averaged_joints_direct(grid, source, 5e-3, TransverseAxis::x, exact());
    const auto b = averaged_joints_direct(grid, source, 5e-3, TransverseAxis::x, cut);
    CHECK(max_diff(a.position, b.position) <= 1e-12);
  }

  TEST_CASE("joints are exchange symmetric and normalised") {
    const auto source = test::double_source();
    const auto grid = auto_grid(64, source, {6.0, 2.0});
    const auto j = averaged_joints_direct(grid, source, 7.5e-3, TransverseAxis::y);
    CHECK(j.position.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j.momentum.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j.boundary_mass < 5e-3);
    for (std::size_t r = 0; r < 64; r += 3)
      for (std::size_t c = 0; c < 64; c += 5)
        CHECK(j.position(r, c) == doctest::Approx(j.position(c, r)).epsilon(1e-10));
  }

  TEST_CASE("truncated momentum support is rejected") {
    const auto source = test::single_source(32.98);
    const auto grid = auto_grid(32, source, {6.0, 0.2});
    CHECK_THROWS_AS(averaged_joints_direct(grid, source, 5e-3, TransverseAxis::x), ConfigError);
    CHECK_THROWS_AS(conditional_position_direct(grid, source, 5e-3), ConfigError);
  }

  TEST_CASE("invalid cut-off") {
    const auto source = test::single_source();
    DirectOptions o;
    o.pump_cutoff = 0.0;
    CHECK_THROWS_AS(averaged_joints_direct(auto_grid(16, source), source, 0.0, TransverseAxis::x, o),
                    ConfigError);
  }
}
