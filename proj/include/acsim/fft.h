// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_FFT_H_
#define ACSIM_FFT_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace acsim {

// Real-input FFT of a fixed length backed by FFTW. Plans are created with
// FFTW_ESTIMATE and shared process-wide, so identical inputs give identical
// outputs on every run. Each instance owns its scratch buffers; use one
// instance per thread.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;

  std::size_t size() const { return n_; }
  std::size_t num_bins() const { return n_ / 2 + 1; }

  // `in` holds size() reals; `out` receives num_bins() complex values.
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalized inverse: Inverse(Forward(x)) == size() * x.
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

// Smallest power of two >= n (n >= 1).
std::size_t NextPowerOfTwo(std::size_t n);

}  // namespace acsim

#endif  // ACSIM_FFT_H_
