// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_SIGNAL_OPS_H_
#define ACSIM_SIGNAL_OPS_H_

#include <span>

#include "acsim/audio_clip.h"

namespace acsim {

// Linear convolution via FFT, truncated to signal.size() samples.
AudioClip FftConvolve(const AudioClip& signal, const AudioClip& kernel);

// Speed change by windowed-sinc interpolation: output sample n reads the input
// at position n * rate_ratio, so the output has round(size / rate_ratio)
// samples and every frequency is multiplied by rate_ratio.
// rate_ratio must lie in [0.5, 2.0].
AudioClip Resample(const AudioClip& clip, double rate_ratio);

// Sample-rate conversion to `target_rate_hz`, preserving duration. Unlike
// Resample() the ratio is unrestricted.
AudioClip ResampleToRate(const AudioClip& clip, int target_rate_hz);

struct GainAnchor {
  double time_s = 0.0;
  double gain_db = 0.0;

  friend bool operator==(const GainAnchor&, const GainAnchor&) = default;
};

// Piecewise-linear gain in dB through the anchors, held constant before the
// first and after the last anchor. Anchors must be sorted by time and lie
// within the clip.
AudioClip ApplyGainEnvelope(const AudioClip& clip,
                            std::span<const GainAnchor> anchors);

struct EqBand {
  double center_hz = 1000.0;
  double gain_db = 0.0;
  double q = 1.0;

  friend bool operator==(const EqBand&, const EqBand&) = default;
};

// Cascade of second-order peaking filters (RBJ cookbook), one per band.
AudioClip PeakingEq(const AudioClip& clip, std::span<const EqBand> bands);

}  // namespace acsim

#endif  // ACSIM_SIGNAL_OPS_H_
