// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/fft.h"

#include <algorithm>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "acsim/errors.h"

namespace acsim {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// FFTW's planner is not re-entrant; execution of an existing plan is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

const PlanPair& PlansFor(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(PlannerMutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  double* real = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
  const int len = static_cast<int>(n);
  PlanPair plans;
  plans.forward = fftw_plan_dft_r2c_1d(len, real, spec, FFTW_ESTIMATE);
  plans.inverse = fftw_plan_dft_c2r_1d(len, spec, real, FFTW_ESTIMATE);
  fftw_free(real);
  fftw_free(spec);
  return cache.emplace(n, plans).first->second;
}

}  // namespace

struct RealFft::Impl {
  const PlanPair* plans = nullptr;
  double* real = nullptr;
  fftw_complex* spec = nullptr;

  ~Impl() {
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw ConfigError("FFT length must be positive");
  impl_->plans = &PlansFor(n);
  impl_->real = fftw_alloc_real(n);
  impl_->spec = fftw_alloc_complex(n / 2 + 1);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  std::copy_n(in.begin(), n_, impl_->real);
  fftw_execute_dft_r2c(impl_->plans->forward, impl_->real, impl_->spec);
  const auto* spec = reinterpret_cast<const std::complex<double>*>(impl_->spec);
  std::copy_n(spec, num_bins(), out.begin());
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  auto* spec = reinterpret_cast<std::complex<double>*>(impl_->spec);
  std::copy_n(in.begin(), num_bins(), spec);
  // c2r overwrites its input, which is our private scratch buffer.
  fftw_execute_dft_c2r(impl_->plans->inverse, impl_->spec, impl_->real);
  std::copy_n(impl_->real, n_, out.begin());
}

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace acsim
