#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dhls::detail {

std::size_t next_pow2(std::size_t n);

/// Iterative radix-2 complex FFT with precomputed twiddles. Transform
/// length is fixed at construction and must be a power of two. The same
/// instance is safe to share across threads once built.
class Radix2Fft {
public:
  explicit Radix2Fft(std::size_t size);

  std::size_t size() const { return size_; }

  void forward(std::complex<double>* data) const { transform(data, false); }
  /// Unscaled inverse; caller divides by size() once per full transform.
  void inverse(std::complex<double>* data) const { transform(data, true); }

private:
  void transform(std::complex<double>* data, bool invert) const;

  std::size_t size_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2*pi*i*k/size), k < size/2
};

}  // namespace dhls::detail
