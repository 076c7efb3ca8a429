#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "spdc/fft.hpp"

using namespace spdc;

namespace {

// Literal centered DFT along one axis of a row-major array.
std::vector<Complex> naive_axis(const std::vector<Complex>& in, const std::vector<std::size_t>& shape,
                                std::size_t axis, int sign) {
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < shape.size(); ++a) stride *= shape[a];
  const std::size_t n = shape[axis];
  std::vector<Complex> out(in.size());
  for (std::size_t flat = 0; flat < in.size(); ++flat) {
    const std::size_t m = (flat / stride) % n;
    const std::size_t base = flat - m * stride;
    Complex sum{};
    for (std::size_t k = 0; k < n; ++k) {
      const double ph = sign * 2.0 * std::numbers::pi *
                        (static_cast<double>(k) - n / 2.0) * (static_cast<double>(m) - n / 2.0) / n;
      sum += in[base + k * stride] * std::polar(1.0, ph);
    }
    out[flat] = sum;
  }
  return out;
}

ComplexBuffer sample(std::size_t size) {
  ComplexBuffer v(size);
  for (std::size_t k = 0; k < size; ++k) v[k] = {std::sin(0.37 * k + 0.1), std::cos(1.13 * k)};
  return v;
}

}  // namespace

TEST_SUITE("fft") {
  TEST_CASE("centered transform matches the literal sum on selected axes") {
    const std::vector<std::size_t> shape = {4, 6, 8};
    const std::array<std::size_t, 2> axes = {0, 2};
    for (auto sign : {fft::Sign::forward, fft::Sign::backward}) {
      auto data = sample(4 * 6 * 8);
      std::vector<Complex> ref(data.begin(), data.end());
      for (auto a : axes) ref = naive_axis(ref, shape, a, static_cast<int>(sign));
      fft::centered_transform(data, shape, axes, sign, 0.5);
      double worst = 0.0;
      for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(data[k] - 0.5 * ref[k]));
      CHECK(worst < 1e-12);
    }
  }

  TEST_CASE("forward then backward with 1/n scaling is the identity") {
    const std::vector<std::size_t> shape = {8, 8, 8, 8};
    const std::array<std::size_t, 4> axes = {0, 1, 2, 3};
    auto data = sample(8 * 8 * 8 * 8);
    const ComplexBuffer original = data;
    fft::centered_transform(data, shape, axes, fft::Sign::forward, 1.0);
    fft::centered_transform(data, shape, axes, fft::Sign::backward, 1.0 / 4096.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < data.size(); ++k) worst = std::max(worst, std::abs(data[k] - original[k]));
    CHECK(worst < 1e-13);
  }

  TEST_CASE("reusable 2D plan agrees with the axis-by-axis transform") {
    const std::vector<std::size_t> shape = {8, 16};
    const std::array<std::size_t, 2> axes = {0, 1};
    for (auto sign : {fft::Sign::forward, fft::Sign::backward}) {
      auto a = sample(128);
      auto b = a;
      fft::centered_transform(a, shape, axes, sign, 1.0);
      const fft::Centered2D plan(8, 16, sign);
      plan.execute(b);
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
    }
  }

  TEST_CASE("a delta at the origin transforms to a constant") {
    const std::vector<std::size_t> shape = {6, 10};
    const std::array<std::size_t, 2> axes = {0, 1};
    ComplexBuffer data(60);
    data[3 * 10 + 5] = 1.0;
    fft::centered_transform(data, shape, axes, fft::Sign::forward, 1.0);
    for (const auto& v : data) CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-14);
  }
}
