#pragma once

#include <memory>
#include <vector>

#include "qoz/types.hpp"

namespace qoz {

/// Complex-to-complex FFT of fixed size, 1D or 2D. Forward applies
/// exp(-i k.q), backward exp(+i k.q); both are unnormalized sums.
/// Plans are created with FFTW_ESTIMATE so repeated runs are bit-identical.
/// A plan instance is not safe for concurrent execute() calls; make one per
/// thread.
class Fft {
 public:
  static Fft make_1d(int n);
  static Fft make_2d(int n0, int n1);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const;
  void forward(const std::vector<Complex>& in, std::vector<Complex>& out);
  void backward(const std::vector<Complex>& in, std::vector<Complex>& out);

 private:
  struct Impl;
  explicit Fft(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

/// Signed mode index of DFT bin i on an n-point axis: 0,1,..,n/2,-(n/2-1),..,-1.
inline int fft_mode(std::size_t i, std::size_t n) {
  return i <= n / 2 ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n);
}

}  // namespace qoz
