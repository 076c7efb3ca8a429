#include "spdc/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace spdc::fft {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// Multiplies each element by (-1)^(sum of its indices over `axes`).
void modulate(std::span<Complex> data, std::span<const std::size_t> shape,
              std::span<const std::size_t> axes) {
  const std::size_t rank = shape.size();
  std::vector<std::size_t> stride(rank, 1);
  for (std::size_t a = rank - 1; a > 0; --a) stride[a - 1] = stride[a] * shape[a];
  std::vector<bool> active(rank, false);
  for (auto a : axes) active[a] = true;

  // Walk the array with an odometer on the parity of the active indices.
  std::vector<std::size_t> idx(rank, 0);
  unsigned parity = 0;
  const std::size_t inner = shape[rank - 1];
  const bool inner_active = active[rank - 1];
  for (std::size_t base = 0; base < data.size(); base += inner) {
    Complex* row = data.data() + base;
    if (inner_active) {
      std::size_t start = parity & 1u;
      for (std::size_t k = start; k < inner; k += 2) row[k] = -row[k];
    } else if (parity & 1u) {
      for (std::size_t k = 0; k < inner; ++k) row[k] = -row[k];
    }
    for (std::size_t a = rank - 1; a-- > 0;) {
      ++idx[a];
      if (active[a]) parity ^= 1u;
      if (idx[a] < shape[a]) break;
      // wrapped: undo the parity contribution of this axis (shape is even)
      idx[a] = 0;
      if (active[a]) parity ^= static_cast<unsigned>(shape[a] & 1u);
    }
  }
}

}  // namespace

void centered_transform(std::span<Complex> data, std::span<const std::size_t> shape,
                        std::span<const std::size_t> axes, Sign sign, double scale) {
  const int rank = static_cast<int>(shape.size());
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (total != data.size()) throw std::invalid_argument("centered_transform: shape mismatch");
  for (auto a : axes) {
    if (a >= shape.size() || shape[a] % 2 != 0) {
      throw std::invalid_argument("centered_transform: transformed axes must have even length");
    }
  }

  std::vector<std::ptrdiff_t> stride(rank, 1);
  for (int a = rank - 1; a > 0; --a) stride[a - 1] = stride[a] * static_cast<std::ptrdiff_t>(shape[a]);

  modulate(data, shape, axes);
  for (auto axis : axes) {
    fftw_iodim dim{static_cast<int>(shape[axis]), static_cast<int>(stride[axis]),
                   static_cast<int>(stride[axis])};
    std::vector<fftw_iodim> loops;
    for (int a = 0; a < rank; ++a) {
      if (static_cast<std::size_t>(a) == axis) continue;
      loops.push_back({static_cast<int>(shape[a]), static_cast<int>(stride[a]),
                       static_cast<int>(stride[a])});
    }
    fftw_plan plan;
    {
      std::lock_guard lock(planner_mutex());
      plan = fftw_plan_guru_dft(1, &dim, static_cast<int>(loops.size()), loops.data(),
                                as_fftw(data.data()), as_fftw(data.data()),
                                static_cast<int>(sign), FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("centered_transform: FFTW planning failed");
    fftw_execute(plan);
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
  modulate(data, shape, axes);

  // exp(sign * i pi n / 2) per axis; +-1 for even n, and +1 when n % 4 == 0.
  int quarter_turns = 0;
  for (auto a : axes) quarter_turns += static_cast<int>(shape[a] / 2);
  const double phase_sign = (quarter_turns % 2 == 0) ? 1.0 : -1.0;
  const double factor = scale * phase_sign;
  if (factor != 1.0) {
    for (auto& v : data) v *= factor;
  }
}

Centered2D::Centered2D(std::size_t rows, std::size_t cols, Sign sign)
    : rows_(rows), cols_(cols), sign_(sign) {
  if (rows % 2 != 0 || cols % 2 != 0) {
    throw std::invalid_argument("Centered2D: dimensions must be even");
  }
  ComplexBuffer scratch(rows * cols);
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), as_fftw(scratch.data()),
                           as_fftw(scratch.data()), static_cast<int>(sign), FFTW_ESTIMATE);
  if (!plan_) throw std::runtime_error("Centered2D: FFTW planning failed");
}

Centered2D::~Centered2D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void Centered2D::execute(std::span<Complex> buffer) const {
  const std::size_t shape[2] = {rows_, cols_};
  const std::size_t axes[2] = {0, 1};
  modulate(buffer, shape, axes);
  fftw_execute_dft(static_cast<fftw_plan>(plan_), as_fftw(buffer.data()), as_fftw(buffer.data()));
  modulate(buffer, shape, axes);
  if ((rows_ / 2 + cols_ / 2) % 2 != 0) {
    for (auto& v : buffer) v = -v;
  }
}

}  // namespace spdc::fft
