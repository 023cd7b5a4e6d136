// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_ACOUSTIC_SIM_H_
#define ACSIM_ACOUSTIC_SIM_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acsim/audio_clip.h"
#include "acsim/config.h"
#include "acsim/random.h"

namespace acsim {

class RoomImpulseResponse {
 public:
  // Throws DataError if `clip` is silent or direct_index is out of range.
  RoomImpulseResponse(AudioClip clip, std::size_t direct_index);

  // Direct path taken as the sample of largest magnitude.
  static RoomImpulseResponse FromClip(AudioClip clip);

  const AudioClip& clip() const { return clip_; }
  std::size_t direct_index() const { return direct_index_; }

 private:
  AudioClip clip_;
  std::size_t direct_index_;
};

struct RirAugmentParams {
  double drr_scale = 1.0;
  double rt60_scale = 1.0;

  void Validate() const;
  friend bool operator==(const RirAugmentParams&, const RirAugmentParams&) = default;
};

// Volume anchor at a fractional position in [0, 1] of the clip it is applied
// to, so a plan can be drawn before the clip length is known.
struct VolumeAnchor {
  double position = 0.0;
  double gain_db = 0.0;

  friend bool operator==(const VolumeAnchor&, const VolumeAnchor&) = default;
};

struct ReverbPlan {
  std::string rir_id;
  RirAugmentParams params;

  friend bool operator==(const ReverbPlan&, const ReverbPlan&) = default;
};

// Augmentations for one asset. Absent stages are skipped.
struct AcousticPlan {
  std::optional<double> speed_ratio;
  std::optional<std::vector<VolumeAnchor>> volume_anchors;
  // One gain in dB per AcousticConfig::eq_centers_hz entry.
  std::optional<std::vector<double>> pre_reverb_eq;
  std::optional<ReverbPlan> reverb;
  std::optional<std::vector<double>> post_eq;

  bool IsIdentity() const {
    return !speed_ratio && !volume_anchors && !pre_reverb_eq && !reverb && !post_eq;
  }
  friend bool operator==(const AcousticPlan&, const AcousticPlan&) = default;
};

// Speed, volume and reverb are drawn only for speech; EQ for every kind.
// Reverb is never drawn when `rir_ids` is empty.
AcousticPlan DrawAcousticPlan(RandomStream& rng, AssetKind kind,
                              const AcousticConfig& cfg,
                              std::span<const std::string> rir_ids);

// Number of samples on each side of the direct-path peak that belong to the
// direct segment.
std::size_t DirectWindowSamples(int sample_rate_hz, double direct_window_ms);

// Energy of the direct segment divided by the energy of everything else.
double DirectToReverberantRatio(const RoomImpulseResponse& rir,
                                double direct_window_ms = 2.5);

// T60 from Schroeder backward integration, with a line fit to the energy
// decay curve between -5 and -35 dB (falling back to -5..-25 dB). Returns
// nullopt if the decay never reaches -25 dB.
std::optional<double> EstimateT60(const RoomImpulseResponse& rir);

// Rescales DRR and RT60 of an RIR. Direct-segment samples are copied
// unchanged; the remaining samples get an exponential envelope e^(a t) that
// scales T60 by rt60_scale, then a constant gain that divides their energy
// by drr_scale relative to the input.
RoomImpulseResponse AugmentRir(const RoomImpulseResponse& rir,
                               const RirAugmentParams& params,
                               double direct_window_ms = 2.5);

using RirLookup = std::function<const RoomImpulseResponse&(const std::string&)>;

struct AppliedPlan {
  AudioClip clip;
  // Gain applied after all stages to keep the peak at or below 0.99; 1.0
  // when the output did not clip.
  double normalization_gain = 1.0;
};

// Applies speed -> volume -> pre-reverb EQ -> reverb -> post EQ.
AppliedPlan ApplyPlan(const AudioClip& clip, const AcousticPlan& plan,
                      const AcousticConfig& cfg, const RirLookup& rir_lookup);

}  // namespace acsim

#endif  // ACSIM_ACOUSTIC_SIM_H_
