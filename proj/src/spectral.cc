// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/spectral.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "acsim/fft.h"

namespace acsim {
namespace {

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Runs `fn(frame_index, spectrum)` for every centered frame of `clip`.
template <typename Fn>
void ForEachFrame(const AudioClip& clip, std::size_t fft_length,
                  std::size_t hop_length, WindowType window, Fn&& fn) {
  const std::size_t frames = NumStftFrames(clip.size(), hop_length);
  const std::vector<double> win = MakeWindow(window, fft_length);
  const auto samples = clip.samples();
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(fft_length / 2);
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(samples.size());

  RealFft fft(fft_length);
  std::vector<double> frame(fft_length);
  std::vector<std::complex<double>> spectrum(fft.num_bins());
  for (std::size_t f = 0; f < frames; ++f) {
    const std::ptrdiff_t start =
        static_cast<std::ptrdiff_t>(f * hop_length) - half;
    for (std::size_t n = 0; n < fft_length; ++n) {
      const std::ptrdiff_t src = start + static_cast<std::ptrdiff_t>(n);
      frame[n] = (src >= 0 && src < len) ? samples[src] * win[n] : 0.0;
    }
    fft.Forward(frame, spectrum);
    fn(f, spectrum);
  }
}

}  // namespace

StftConfig StftConfig::Standard(std::size_t fft_length) {
  return StftConfig{fft_length, fft_length / 4, WindowType::kHann};
}

void StftConfig::Validate() const {
  if (!IsPowerOfTwo(fft_length)) {
    throw ConfigError(
        fmt::format("fft_length must be a power of two, got {}", fft_length));
  }
  if (hop_length == 0 || hop_length > fft_length) {
    throw ConfigError(fmt::format("hop_length must be in (0, {}], got {}",
                                  fft_length, hop_length));
  }
}

void MelConfig::Validate(int sample_rate_hz) const {
  StftConfig{fft_length, hop_length, WindowType::kHann}.Validate();
  if (n_mels == 0) throw ConfigError("n_mels must be at least 1");
  const double nyquist = sample_rate_hz / 2.0;
  if (!(fmin_hz >= 0.0 && fmin_hz < fmax_hz && fmax_hz <= nyquist)) {
    throw ConfigError(fmt::format(
        "mel range must satisfy 0 <= fmin < fmax <= {}, got [{}, {}]", nyquist,
        fmin_hz, fmax_hz));
  }
}

std::vector<double> MakeWindow(WindowType type, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (type == WindowType::kHann) {
    // Periodic Hann.
    for (std::size_t n = 0; n < length; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
    }
  }
  return w;
}

std::size_t NumStftFrames(std::size_t num_samples, std::size_t hop_length) {
  return num_samples / hop_length + 1;
}

Spectrogram StftMagnitude(const AudioClip& clip, const StftConfig& cfg) {
  cfg.Validate();
  Spectrogram out(NumStftFrames(clip.size(), cfg.hop_length),
                  cfg.fft_length / 2 + 1);
  ForEachFrame(clip, cfg.fft_length, cfg.hop_length, cfg.window,
               [&](std::size_t f, const auto& spectrum) {
                 for (std::size_t k = 0; k < out.bins(); ++k) {
                   out.at(f, k) = std::abs(spectrum[k]);
                 }
               });
  return out;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Spectrogram MelFilterbank(const MelConfig& cfg, int sample_rate_hz) {
  cfg.Validate(sample_rate_hz);
  const std::size_t bins = cfg.fft_length / 2 + 1;
  Spectrogram weights(cfg.n_mels, bins);

  const double mel_lo = HzToMel(cfg.fmin_hz);
  const double mel_hi = HzToMel(cfg.fmax_hz);
  std::vector<double> edges(cfg.n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(cfg.n_mels + 1));
  }

  const double bin_hz =
      static_cast<double>(sample_rate_hz) / static_cast<double>(cfg.fft_length);
  for (std::size_t m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m];
    const double center = edges[m + 1];
    const double right = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      const double rising = (f - left) / (center - left);
      const double falling = (right - f) / (right - center);
      weights.at(m, k) = std::max(0.0, std::min(rising, falling));
    }
  }
  return weights;
}

Spectrogram MelSpectrogram(const AudioClip& clip, const MelConfig& cfg) {
  const Spectrogram fb = MelFilterbank(cfg, clip.sample_rate());
  // Nonzero bin range [first, last) of each triangular filter.
  std::vector<std::pair<std::size_t, std::size_t>> support(cfg.n_mels, {0, 0});
  for (std::size_t m = 0; m < cfg.n_mels; ++m) {
    std::size_t first = fb.bins(), last = 0;
    for (std::size_t k = 0; k < fb.bins(); ++k) {
      if (fb.at(m, k) > 0.0) {
        first = std::min(first, k);
        last = k + 1;
      }
    }
    if (first < last) support[m] = {first, last};
  }
  Spectrogram out(NumStftFrames(clip.size(), cfg.hop_length), cfg.n_mels);
  std::vector<double> power(fb.bins());
  ForEachFrame(clip, cfg.fft_length, cfg.hop_length, WindowType::kHann,
               [&](std::size_t f, const auto& spectrum) {
                 for (std::size_t k = 0; k < power.size(); ++k) {
                   power[k] = std::norm(spectrum[k]);
                 }
                 for (std::size_t m = 0; m < cfg.n_mels; ++m) {
                   double acc = 0.0;
                   for (std::size_t k = support[m].first; k < support[m].second; ++k) {
                     acc += fb.at(m, k) * power[k];
                   }
                   out.at(f, m) = acc;
                 }
               });
  return out;
}

}  // namespace acsim
