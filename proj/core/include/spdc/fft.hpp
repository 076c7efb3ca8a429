#pragma once

// Centered discrete Fourier transforms over selected axes of row-major
// complex arrays, backed by FFTW.
//
// Convention for an axis of even length n (sample index k <-> coordinate
// (k - n/2) * step):
//
//   out[m] = scale * sum_k in[k] * exp(sign * 2 pi i (k - n/2)(m - n/2) / n)
//
// The origin of both grids is therefore at index n/2. The shift is applied by
// (-1)^k modulation rather than by copying.

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace spdc {

using Complex = std::complex<double>;

/// 64-byte aligned allocator. FFTW picks codelets by alignment; a fixed
/// alignment keeps transforms bit-reproducible from run to run.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), alignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

namespace fft {

enum class Sign : int { forward = -1, backward = +1 };

/// In-place centered transform along each axis in `axes`, one 1-axis pass at
/// a time, then multiplied by `scale`. Every transformed axis length must be
/// even.
void centered_transform(std::span<Complex> data, std::span<const std::size_t> shape,
                        std::span<const std::size_t> axes, Sign sign, double scale);

/// Reusable centered 2D transform for repeated same-size work (the plan is
/// built once; execute() is safe to call concurrently on distinct buffers).
class Centered2D {
 public:
  Centered2D(std::size_t rows, std::size_t cols, Sign sign);
  ~Centered2D();
  Centered2D(const Centered2D&) = delete;
  Centered2D& operator=(const Centered2D&) = delete;

  /// `buffer` must come from a ComplexBuffer of rows*cols elements.
  void execute(std::span<Complex> buffer) const;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  Sign sign_;
  void* plan_ = nullptr;
};

}  // namespace fft
}  // namespace spdc
