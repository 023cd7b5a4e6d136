// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_AUDIO_CLIP_H_
#define ACSIM_AUDIO_CLIP_H_

#include <cstddef>
#include <span>
#include <vector>

#include "acsim/errors.h"

namespace acsim {

inline constexpr int kDefaultSampleRate = 16000;

// Mono sample buffer. Samples are always finite; zero-length clips are valid
// and behave as silence.
class AudioClip {
 public:
  AudioClip() = default;
  AudioClip(std::vector<double> samples, int sample_rate_hz);

  static AudioClip Silence(std::size_t num_samples, int sample_rate_hz);

  int sample_rate() const { return sample_rate_hz_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_s() const {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  // Mutable access. Callers must keep samples finite; CheckFinite() re-asserts.
  std::vector<double>& mutable_samples() { return samples_; }
  void CheckFinite() const;

  double Energy() const;
  double PeakAbs() const;

  // Multiplies every sample by `gain`.
  AudioClip Scaled(double gain) const;

  friend bool operator==(const AudioClip&, const AudioClip&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_hz_ = kDefaultSampleRate;
};

}  // namespace acsim

#endif  // ACSIM_AUDIO_CLIP_H_
