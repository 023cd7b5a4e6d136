// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/audio_clip.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace acsim {

AudioClip::AudioClip(std::vector<double> samples, int sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (sample_rate_hz_ <= 0) {
    throw ConfigError(fmt::format("sample rate must be positive, got {}",
                                  sample_rate_hz_));
  }
  CheckFinite();
}

AudioClip AudioClip::Silence(std::size_t num_samples, int sample_rate_hz) {
  return AudioClip(std::vector<double>(num_samples, 0.0), sample_rate_hz);
}

void AudioClip::CheckFinite() const {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw DataError(fmt::format("non-finite sample at index {}", i));
    }
  }
}

double AudioClip::Energy() const {
  double e = 0.0;
  for (double v : samples_) e += v * v;
  return e;
}

double AudioClip::PeakAbs() const {
  double peak = 0.0;
  for (double v : samples_) peak = std::max(peak, std::abs(v));
  return peak;
}

AudioClip AudioClip::Scaled(double gain) const {
  std::vector<double> out(samples_);
  for (double& v : out) v *= gain;
  return AudioClip(std::move(out), sample_rate_hz_);
}

}  // namespace acsim
