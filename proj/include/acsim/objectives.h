// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_OBJECTIVES_H_
#define ACSIM_OBJECTIVES_H_

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "acsim/audio_clip.h"
#include "acsim/spectral.h"

namespace acsim {

// SI-SDR and Silence-SDR are undefined when the reference has no energy.
class SilentReferenceError : public std::domain_error {
 public:
  explicit SilentReferenceError(const std::string& what) : std::domain_error(what) {}
};

inline constexpr double kDefaultSdrCapDb = 60.0;
inline constexpr double kLogFloor = 1e-5;

struct LossWeights {
  double lambda_mstft = 10.0;
  double lambda_mel = 10.0;
  double lambda_time = 100.0;
  double lambda_sdr = 1.0;
};

struct LossBreakdown {
  double l_mstft = 0.0;
  double l_mel = 0.0;
  double l_time = 0.0;
  double l_sdr = 0.0;
  double total = 0.0;
};

struct ObjectiveConfig {
  std::array<StftConfig, 3> mstft = {StftConfig::Standard(512),
                                     StftConfig::Standard(1024),
                                     StftConfig::Standard(2048)};
  MelConfig mel;
  double log_floor = kLogFloor;
  double sdr_cap_db = kDefaultSdrCapDb;
  // Energy offset of the silent-reference SDR substitute.
  double silent_ref_epsilon = 1e-8;
};

// sum_i || log|STFT(ref)| - log|STFT(est)| ||_1 over the given resolutions,
// magnitudes clamped below at `log_floor`.
double MstftLoss(const AudioClip& ref, const AudioClip& est,
                 std::span<const StftConfig> configs, double log_floor = kLogFloor);
// Default resolutions 512 / 1024 / 2048 with hop = fft / 4.
double MstftLoss(const AudioClip& ref, const AudioClip& est);

double MelLoss(const AudioClip& ref, const AudioClip& est,
               const MelConfig& cfg = {}, double log_floor = kLogFloor);

// ||ref - est||_2.
double TimeL2Loss(const AudioClip& ref, const AudioClip& est);

// Scale-invariant SDR in dB, capped at `cap_db`. A zero estimate scores
// -cap_db. Throws SilentReferenceError for a silent reference.
double SiSdr(const AudioClip& ref, const AudioClip& est,
             double cap_db = kDefaultSdrCapDb);

// 10 log10(||ref||^2 / ||est||^2), capped at `cap_db`. Throws
// SilentReferenceError for a silent reference.
double SilenceSdr(const AudioClip& ref, const AudioClip& est,
                  double cap_db = kDefaultSdrCapDb);

// Metric gain of an estimate over the mixture-as-estimate baseline.
inline double Improvement(double metric_value_est, double metric_value_baseline) {
  return metric_value_est - metric_value_baseline;
}

// All four terms and
//   total = lambda_time L_time + lambda_mstft L_mstft + lambda_mel L_mel
//         + lambda_sdr L_sdr,
// where L_sdr = -SiSdr for a non-silent reference and
// 10 log10(||est||^2 + epsilon) for a silent one.
LossBreakdown CombinedLoss(const AudioClip& ref, const AudioClip& est,
                           const LossWeights& weights = {},
                           const ObjectiveConfig& cfg = {});

enum class Objective { kMinimize, kMaximize };

struct PitScore {
  // permutation[r] is the estimate channel assigned to reference r.
  std::vector<std::size_t> permutation;
  // Score of each reference with its assigned estimate.
  std::vector<double> per_channel;
  // Mean of per_channel; the optimum over all assignments.
  double aggregate = 0.0;
};

// score(r, e) for reference r and estimate e.
using PairScorer = std::function<double(std::size_t, std::size_t)>;

inline constexpr std::size_t kMaxPitChannels = 8;

// Exhaustive search over all n! assignments. Each pair is scored once; ties
// go to the lexicographically smallest permutation.
PitScore PitResolve(std::size_t num_channels, const PairScorer& score,
                    Objective objective);

using ClipScorer = std::function<double(const AudioClip& ref, const AudioClip& est)>;

PitScore PitResolve(std::span<const AudioClip> refs, std::span<const AudioClip> ests,
                    const ClipScorer& score, Objective objective);

// PIT over the combined loss, keeping each channel's breakdown.
struct PitLoss {
  PitScore score;
  std::vector<LossBreakdown> per_channel;
};
PitLoss PitCombinedLoss(std::span<const AudioClip> refs,
                        std::span<const AudioClip> ests,
                        const LossWeights& weights = {},
                        const ObjectiveConfig& cfg = {});

struct TwoSpeakerScores {
  std::vector<std::size_t> permutation;
  std::array<double, 2> si_sdr{};
  std::array<double, 2> si_sdri{};
  double mean_si_sdri = 0.0;
};

// PIT maximizing mean SI-SDR; baseline is the mixture on each channel.
TwoSpeakerScores EvaluateTwoSpeaker(std::span<const AudioClip> refs,
                                    std::span<const AudioClip> ests,
                                    const AudioClip& mixture,
                                    double cap_db = kDefaultSdrCapDb);

struct SingleSpeakerScores {
  // permutation[0] is the speaker channel, permutation[1] the silent one.
  std::vector<std::size_t> permutation;
  double si_sdr = 0.0;
  double si_sdri = 0.0;
  double silence_sdr = 0.0;
  double silence_sdri = 0.0;
};

// The speaker channel is the estimate with the higher SI-SDR against the
// speaker; the other channel is scored with SilenceSdr(speaker, channel).
// Both improvements use the mixture as the baseline estimate.
SingleSpeakerScores EvaluateSingleSpeaker(const AudioClip& speaker,
                                          std::span<const AudioClip> ests,
                                          const AudioClip& mixture,
                                          double cap_db = kDefaultSdrCapDb);

}  // namespace acsim

#endif  // ACSIM_OBJECTIVES_H_
