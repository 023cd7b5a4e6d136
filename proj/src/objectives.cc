// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/objectives.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "acsim/errors.h"

namespace acsim {
namespace {

// Residual below this fraction of the target energy scores the cap.
constexpr double kCapEnergyRatio = 1e-12;

void CheckPair(const AudioClip& ref, const AudioClip& est) {
  if (ref.size() != est.size()) {
    throw ConfigError(fmt::format("reference has {} samples, estimate has {}",
                                  ref.size(), est.size()));
  }
  if (ref.sample_rate() != est.sample_rate()) {
    throw ConfigError(fmt::format("reference is at {} Hz, estimate at {} Hz",
                                  ref.sample_rate(), est.sample_rate()));
  }
}

double LogL1(const Spectrogram& a, const Spectrogram& b, double floor) {
  double acc = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    acc += std::abs(std::log(std::max(da[i], floor)) - std::log(std::max(db[i], floor)));
  }
  return acc;
}

}  // namespace

double MstftLoss(const AudioClip& ref, const AudioClip& est,
                 std::span<const StftConfig> configs, double log_floor) {
  CheckPair(ref, est);
  double total = 0.0;
  for (const StftConfig& cfg : configs) {
    total += LogL1(StftMagnitude(ref, cfg), StftMagnitude(est, cfg), log_floor);
  }
  return total;
}

double MstftLoss(const AudioClip& ref, const AudioClip& est) {
  const ObjectiveConfig defaults;
  return MstftLoss(ref, est, defaults.mstft, defaults.log_floor);
}

double MelLoss(const AudioClip& ref, const AudioClip& est, const MelConfig& cfg,
               double log_floor) {
  CheckPair(ref, est);
  return LogL1(MelSpectrogram(ref, cfg), MelSpectrogram(est, cfg), log_floor);
}

double TimeL2Loss(const AudioClip& ref, const AudioClip& est) {
  CheckPair(ref, est);
  double acc = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref[i] - est[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double SiSdr(const AudioClip& ref, const AudioClip& est, double cap_db) {
  CheckPair(ref, est);
  const double ref_energy = ref.Energy();
  if (ref_energy <= 0.0) {
    throw SilentReferenceError("SI-SDR is undefined for a silent reference");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) dot += est[i] * ref[i];
  const double alpha = dot / ref_energy;
  const double target_energy = alpha * alpha * ref_energy;
  double residual_energy = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double r = alpha * ref[i] - est[i];
    residual_energy += r * r;
  }
  if (target_energy <= 0.0) return -cap_db;
  if (residual_energy < kCapEnergyRatio * target_energy) return cap_db;
  return std::min(cap_db, 10.0 * std::log10(target_energy / residual_energy));
}

double SilenceSdr(const AudioClip& ref, const AudioClip& est, double cap_db) {
  CheckPair(ref, est);
  const double ref_energy = ref.Energy();
  if (ref_energy <= 0.0) {
    throw SilentReferenceError("Silence-SDR is undefined for a silent reference");
  }
  const double est_energy = est.Energy();
  if (est_energy < kCapEnergyRatio * ref_energy) return cap_db;
  return std::min(cap_db, 10.0 * std::log10(ref_energy / est_energy));
}

LossBreakdown CombinedLoss(const AudioClip& ref, const AudioClip& est,
                           const LossWeights& weights, const ObjectiveConfig& cfg) {
  CheckPair(ref, est);
  LossBreakdown out;
  out.l_mstft = MstftLoss(ref, est, cfg.mstft, cfg.log_floor);
  out.l_mel = MelLoss(ref, est, cfg.mel, cfg.log_floor);
  out.l_time = TimeL2Loss(ref, est);
  if (ref.Energy() > 0.0) {
    out.l_sdr = -SiSdr(ref, est, cfg.sdr_cap_db);
  } else {
    out.l_sdr = 10.0 * std::log10(est.Energy() + cfg.silent_ref_epsilon);
  }
  out.total = weights.lambda_time * out.l_time + weights.lambda_mstft * out.l_mstft +
              weights.lambda_mel * out.l_mel + weights.lambda_sdr * out.l_sdr;
  return out;
}

PitScore PitResolve(std::size_t num_channels, const PairScorer& score,
                    Objective objective) {
  if (num_channels == 0 || num_channels > kMaxPitChannels) {
    throw ConfigError(fmt::format("PIT supports 1 to {} channels, got {}",
                                  kMaxPitChannels, num_channels));
  }
  const std::size_t n = num_channels;
  std::vector<double> matrix(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t e = 0; e < n; ++e) matrix[r * n + e] = score(r, e);
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  PitScore best;
  bool have_best = false;
  // next_permutation walks permutations in lexicographic order, so keeping
  // only strict improvements resolves ties to the smallest permutation.
  do {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += matrix[r * n + perm[r]];
    const double mean = sum / static_cast<double>(n);
    const bool better = !have_best || (objective == Objective::kMinimize
                                           ? mean < best.aggregate
                                           : mean > best.aggregate);
    if (better) {
      best.permutation = perm;
      best.aggregate = mean;
      have_best = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  best.per_channel.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    best.per_channel[r] = matrix[r * n + best.permutation[r]];
  }
  return best;
}

PitScore PitResolve(std::span<const AudioClip> refs, std::span<const AudioClip> ests,
                    const ClipScorer& score, Objective objective) {
  if (refs.size() != ests.size()) {
    throw ConfigError(fmt::format("PIT got {} references but {} estimates",
                                  refs.size(), ests.size()));
  }
  return PitResolve(
      refs.size(), [&](std::size_t r, std::size_t e) { return score(refs[r], ests[e]); },
      objective);
}

PitLoss PitCombinedLoss(std::span<const AudioClip> refs,
                        std::span<const AudioClip> ests, const LossWeights& weights,
                        const ObjectiveConfig& cfg) {
  if (refs.size() != ests.size()) {
    throw ConfigError(fmt::format("PIT got {} references but {} estimates",
                                  refs.size(), ests.size()));
  }
  const std::size_t n = refs.size();
  std::vector<LossBreakdown> all(n * n);
  PitLoss out;
  out.score = PitResolve(
      n,
      [&](std::size_t r, std::size_t e) {
        all[r * n + e] = CombinedLoss(refs[r], ests[e], weights, cfg);
        return all[r * n + e].total;
      },
      Objective::kMinimize);
  for (std::size_t r = 0; r < n; ++r) {
    out.per_channel.push_back(all[r * n + out.score.permutation[r]]);
  }
  return out;
}

TwoSpeakerScores EvaluateTwoSpeaker(std::span<const AudioClip> refs,
                                    std::span<const AudioClip> ests,
                                    const AudioClip& mixture, double cap_db) {
  if (refs.size() != 2 || ests.size() != 2) {
    throw ConfigError("two-speaker evaluation needs two references and two estimates");
  }
  const PitScore pit = PitResolve(
      refs, ests,
      [&](const AudioClip& r, const AudioClip& e) { return SiSdr(r, e, cap_db); },
      Objective::kMaximize);
  TwoSpeakerScores out;
  out.permutation = pit.permutation;
  for (std::size_t c = 0; c < 2; ++c) {
    out.si_sdr[c] = pit.per_channel[c];
    out.si_sdri[c] = Improvement(out.si_sdr[c], SiSdr(refs[c], mixture, cap_db));
  }
  out.mean_si_sdri = (out.si_sdri[0] + out.si_sdri[1]) / 2.0;
  return out;
}

SingleSpeakerScores EvaluateSingleSpeaker(const AudioClip& speaker,
                                          std::span<const AudioClip> ests,
                                          const AudioClip& mixture, double cap_db) {
  if (ests.size() != 2) {
    throw ConfigError("single-speaker evaluation needs two estimate channels");
  }
  // Reference 1 is the silent channel; it contributes a constant so the
  // assignment is decided by the speaker's SI-SDR alone.
  const PitScore pit = PitResolve(
      2,
      [&](std::size_t r, std::size_t e) {
        return r == 0 ? SiSdr(speaker, ests[e], cap_db) : 0.0;
      },
      Objective::kMaximize);
  SingleSpeakerScores out;
  out.permutation = pit.permutation;
  out.si_sdr = pit.per_channel[0];
  out.si_sdri = Improvement(out.si_sdr, SiSdr(speaker, mixture, cap_db));
  out.silence_sdr = SilenceSdr(speaker, ests[pit.permutation[1]], cap_db);
  out.silence_sdri = Improvement(out.silence_sdr, SilenceSdr(speaker, mixture, cap_db));
  return out;
}

}  // namespace acsim
