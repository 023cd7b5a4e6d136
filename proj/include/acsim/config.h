// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_CONFIG_H_
#define ACSIM_CONFIG_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace acsim {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

enum class AssetKind { kSpeech, kStaticNoise, kEventNoise, kRir };

std::string_view AssetKindName(AssetKind kind);

// Probabilities and ranges for per-asset acoustic augmentation.
struct AcousticConfig {
  double p_speed = 0.3;
  double p_volume = 0.5;
  double p_eq = 0.5;
  double p_reverb = 0.5;

  Range speed_range{0.9, 1.2};
  int max_volume_anchors = 3;
  Range volume_db_range{-10.0, 10.0};
  Range eq_gain_db_range{-5.0, 5.0};
  std::vector<double> eq_centers_hz{100.0, 200.0, 400.0, 800.0,
                                    1600.0, 3200.0, 6400.0};
  double eq_q = 1.0;
  Range drr_scale_range{0.5, 2.0};
  Range rt60_scale_range{0.5, 2.0};
  // Half-width of the direct-path window of an RIR.
  double direct_window_ms = 2.5;

  friend bool operator==(const AcousticConfig&, const AcousticConfig&) = default;
};

// Every probability, range, and constant of the simulation.
struct SimulationConfig {
  double duration_s = 5.0;
  int sample_rate_hz = 16000;

  // Content selection. Speaker 1 is always present.
  double p_speaker2 = 0.5;
  double p_static = 0.5;
  double p_event = 0.5;

  // Random split.
  double l1 = 0.2;
  double l2 = 1.0;
  double p_seg = 0.75;

  double p_overlap_removal = 0.5;

  // Mixing levels. Speaker 1 is set to an absolute RMS level; speaker 2 is
  // relative to speaker 1; noise SNRs are relative to the summed speech.
  Range speaker1_level_dbfs{-28.0, -18.0};
  Range speech_level_db_range{-5.0, 5.0};
  Range static_snr_db_range{5.0, 25.0};
  Range event_snr_db_range{0.0, 20.0};

  // Speech activity detection for event overlap removal.
  double vad_threshold_dbfs = -40.0;
  double vad_hangover_ms = 50.0;

  AcousticConfig acoustic;

  std::size_t NumSamples() const;
  // Throws ConfigError naming the first invalid field.
  void Validate() const;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

}  // namespace acsim

#endif  // ACSIM_CONFIG_H_
