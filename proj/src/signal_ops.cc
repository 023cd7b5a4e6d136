// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/signal_ops.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "acsim/fft.h"

namespace acsim {
namespace {

constexpr double kPi = std::numbers::pi;

// Interpolation kernel: zero crossings on each side of the center (at the
// kernel's own cutoff) and Kaiser window shape.
constexpr double kSincZeroCrossings = 24.0;
constexpr double kKaiserBeta = 8.0;

constexpr std::size_t kKaiserTableSize = 8192;

double KaiserExact(double x) {
  const double r = 1.0 - x * x;
  if (r <= 0.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(r)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

// Kaiser window at |x| <= 1, linearly interpolated from a table.
double KaiserWindow(double x) {
  static const std::vector<double> table = [] {
    std::vector<double> t(kKaiserTableSize + 2, 0.0);
    for (std::size_t i = 0; i <= kKaiserTableSize; ++i) {
      t[i] = KaiserExact(static_cast<double>(i) / kKaiserTableSize);
    }
    return t;
  }();
  const double pos = std::abs(x) * kKaiserTableSize;
  if (pos >= kKaiserTableSize) return 0.0;
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return table[i] + frac * (table[i + 1] - table[i]);
}

// Reads `clip` at fractional positions n * step for n in [0, out_len).
AudioClip SincInterpolate(const AudioClip& clip, double step,
                          std::size_t out_len, int out_rate) {
  const auto x = clip.samples();
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(x.size());
  // Anti-alias when reading faster than one input sample per output sample.
  const double cutoff = std::min(1.0, 1.0 / step);
  const double half_width = kSincZeroCrossings / cutoff;

  std::vector<double> y(out_len, 0.0);
  for (std::size_t n = 0; n < out_len; ++n) {
    const double t = static_cast<double>(n) * step;
    const auto lo = std::max<std::ptrdiff_t>(
        0, static_cast<std::ptrdiff_t>(std::ceil(t - half_width)));
    const auto hi = std::min<std::ptrdiff_t>(
        len - 1, static_cast<std::ptrdiff_t>(std::floor(t + half_width)));
    double acc = 0.0;
    for (std::ptrdiff_t m = lo; m <= hi; ++m) {
      const double d = t - static_cast<double>(m);
      double h;
      if (d == 0.0) {
        h = cutoff;
      } else {
        const double arg = kPi * cutoff * d;
        h = cutoff * std::sin(arg) / arg;
      }
      acc += x[m] * h * KaiserWindow(d / half_width);
    }
    y[n] = acc;
  }
  return AudioClip(std::move(y), out_rate);
}

}  // namespace

AudioClip FftConvolve(const AudioClip& signal, const AudioClip& kernel) {
  if (signal.sample_rate() != kernel.sample_rate()) {
    throw ConfigError(fmt::format(
        "convolution sample-rate mismatch: signal {} Hz, kernel {} Hz",
        signal.sample_rate(), kernel.sample_rate()));
  }
  const std::size_t n = signal.size();
  if (n == 0 || kernel.empty()) return AudioClip::Silence(n, signal.sample_rate());

  const std::size_t full = n + kernel.size() - 1;
  const std::size_t fft_len = NextPowerOfTwo(full);
  RealFft fft(fft_len);
  std::vector<double> a(fft_len, 0.0), b(fft_len, 0.0);
  std::copy(signal.samples().begin(), signal.samples().end(), a.begin());
  std::copy(kernel.samples().begin(), kernel.samples().end(), b.begin());
  std::vector<std::complex<double>> sa(fft.num_bins()), sb(fft.num_bins());
  fft.Forward(a, sa);
  fft.Forward(b, sb);
  for (std::size_t k = 0; k < sa.size(); ++k) sa[k] *= sb[k];
  fft.Inverse(sa, a);

  const double scale = 1.0 / static_cast<double>(fft_len);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * scale;
  return AudioClip(std::move(out), signal.sample_rate());
}

AudioClip Resample(const AudioClip& clip, double rate_ratio) {
  if (!(rate_ratio >= 0.5 && rate_ratio <= 2.0)) {
    throw ConfigError(
        fmt::format("resample ratio must be in [0.5, 2.0], got {}", rate_ratio));
  }
  if (rate_ratio == 1.0) return clip;
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(clip.size()) / rate_ratio));
  return SincInterpolate(clip, rate_ratio, out_len, clip.sample_rate());
}

AudioClip ResampleToRate(const AudioClip& clip, int target_rate_hz) {
  if (target_rate_hz <= 0) {
    throw ConfigError(
        fmt::format("target sample rate must be positive, got {}", target_rate_hz));
  }
  if (target_rate_hz == clip.sample_rate()) return clip;
  const double step =
      static_cast<double>(clip.sample_rate()) / static_cast<double>(target_rate_hz);
  const auto out_len = static_cast<std::size_t>(std::llround(
      static_cast<double>(clip.size()) * target_rate_hz / clip.sample_rate()));
  return SincInterpolate(clip, step, out_len, target_rate_hz);
}

AudioClip ApplyGainEnvelope(const AudioClip& clip,
                            std::span<const GainAnchor> anchors) {
  if (anchors.empty()) return clip;
  const double duration = clip.duration_s();
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    if (a > 0 && anchors[a].time_s < anchors[a - 1].time_s) {
      throw ConfigError(fmt::format("gain anchors not sorted at index {}", a));
    }
    if (anchors[a].time_s < 0.0 || anchors[a].time_s > duration) {
      throw ConfigError(fmt::format("gain anchor {} at {} s outside clip [0, {}]",
                                    a, anchors[a].time_s, duration));
    }
  }

  std::vector<double> y(clip.samples().begin(), clip.samples().end());
  const double rate = clip.sample_rate();
  std::size_t seg = 0;  // anchors[seg] is the last anchor at or before t.
  for (std::size_t n = 0; n < y.size(); ++n) {
    const double t = static_cast<double>(n) / rate;
    while (seg + 1 < anchors.size() && anchors[seg + 1].time_s <= t) ++seg;
    double gain_db;
    if (t <= anchors.front().time_s) {
      gain_db = anchors.front().gain_db;
    } else if (seg + 1 >= anchors.size()) {
      gain_db = anchors.back().gain_db;
    } else {
      const GainAnchor& a = anchors[seg];
      const GainAnchor& b = anchors[seg + 1];
      const double frac = (t - a.time_s) / (b.time_s - a.time_s);
      gain_db = a.gain_db + frac * (b.gain_db - a.gain_db);
    }
    y[n] *= std::pow(10.0, gain_db / 20.0);
  }
  return AudioClip(std::move(y), clip.sample_rate());
}

AudioClip PeakingEq(const AudioClip& clip, std::span<const EqBand> bands) {
  const double rate = clip.sample_rate();
  std::vector<double> y(clip.samples().begin(), clip.samples().end());
  for (const EqBand& band : bands) {
    if (!(band.center_hz > 0.0 && band.center_hz < rate / 2.0)) {
      throw ConfigError(fmt::format("EQ center {} Hz outside (0, {})",
                                    band.center_hz, rate / 2.0));
    }
    if (!(band.q > 0.0)) {
      throw ConfigError(fmt::format("EQ Q must be positive, got {}", band.q));
    }
    const double amp = std::pow(10.0, band.gain_db / 40.0);
    const double w0 = 2.0 * kPi * band.center_hz / rate;
    const double alpha = std::sin(w0) / (2.0 * band.q);
    const double cosw = std::cos(w0);
    const double a0 = 1.0 + alpha / amp;
    const double b0 = (1.0 + alpha * amp) / a0;
    const double b1 = (-2.0 * cosw) / a0;
    const double b2 = (1.0 - alpha * amp) / a0;
    const double a1 = (-2.0 * cosw) / a0;
    const double a2 = (1.0 - alpha / amp) / a0;

    // Transposed direct form II.
    double s1 = 0.0, s2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = b0 * in + s1;
      s1 = b1 * in - a1 * out + s2;
      s2 = b2 * in - a2 * out;
      v = out;
    }
  }
  return AudioClip(std::move(y), clip.sample_rate());
}

}  // namespace acsim
