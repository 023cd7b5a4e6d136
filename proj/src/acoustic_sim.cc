// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/acoustic_sim.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "acsim/errors.h"
#include "acsim/signal_ops.h"

namespace acsim {
namespace {

// ln(10^6) / 2: amplitude decay rate is kDecayPerT60 / T60 for a 60 dB drop.
const double kDecayPerT60 = 3.0 * std::numbers::ln10;

constexpr double kClipThreshold = 1.0;
constexpr double kNormalizedPeak = 0.99;

std::vector<double> DrawEqGains(RandomStream& rng, const AcousticConfig& cfg) {
  std::vector<double> gains(cfg.eq_centers_hz.size());
  for (double& g : gains) {
    g = rng.UniformReal(cfg.eq_gain_db_range.lo, cfg.eq_gain_db_range.hi);
  }
  return gains;
}

AudioClip ApplyEq(const AudioClip& clip, const std::vector<double>& gains,
                  const AcousticConfig& cfg) {
  if (gains.size() != cfg.eq_centers_hz.size()) {
    throw ConfigError(fmt::format("EQ plan has {} gains but {} bands are configured",
                                  gains.size(), cfg.eq_centers_hz.size()));
  }
  std::vector<EqBand> bands;
  bands.reserve(gains.size());
  for (std::size_t b = 0; b < gains.size(); ++b) {
    bands.push_back({cfg.eq_centers_hz[b], gains[b], cfg.eq_q});
  }
  return PeakingEq(clip, bands);
}

struct DirectSegment {
  std::size_t begin;
  std::size_t end;  // exclusive
};

DirectSegment FindDirectSegment(const RoomImpulseResponse& rir,
                                double direct_window_ms) {
  const std::size_t w =
      DirectWindowSamples(rir.clip().sample_rate(), direct_window_ms);
  const std::size_t len = rir.clip().size();
  if (len < 2 * w + 1) {
    throw DataError(fmt::format(
        "RIR of {} samples is shorter than the {}-sample direct window", len,
        2 * w + 1));
  }
  const std::size_t d = rir.direct_index();
  return {d >= w ? d - w : 0, std::min(len, d + w + 1)};
}

}  // namespace

RoomImpulseResponse::RoomImpulseResponse(AudioClip clip, std::size_t direct_index)
    : clip_(std::move(clip)), direct_index_(direct_index) {
  if (clip_.Energy() <= 0.0) throw DataError("RIR is silent");
  if (direct_index_ >= clip_.size()) {
    throw DataError(fmt::format("RIR direct index {} out of range for {} samples",
                                direct_index_, clip_.size()));
  }
}

RoomImpulseResponse RoomImpulseResponse::FromClip(AudioClip clip) {
  const auto s = clip.samples();
  std::size_t peak = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (std::abs(s[i]) > std::abs(s[peak])) peak = i;
  }
  return RoomImpulseResponse(std::move(clip), peak);
}

void RirAugmentParams::Validate() const {
  if (!(drr_scale >= 0.5 && drr_scale <= 2.0 && rt60_scale >= 0.5 &&
        rt60_scale <= 2.0)) {
    throw ConfigError(fmt::format(
        "RIR scales must lie in [0.5, 2.0], got drr={} rt60={}", drr_scale,
        rt60_scale));
  }
}

AcousticPlan DrawAcousticPlan(RandomStream& rng, AssetKind kind,
                              const AcousticConfig& cfg,
                              std::span<const std::string> rir_ids) {
  AcousticPlan plan;
  if (kind == AssetKind::kSpeech) {
    if (rng.Bernoulli(cfg.p_speed)) {
      plan.speed_ratio = rng.UniformReal(cfg.speed_range.lo, cfg.speed_range.hi);
    }
    if (rng.Bernoulli(cfg.p_volume)) {
      const auto count = rng.UniformInt(0, cfg.max_volume_anchors);
      std::vector<VolumeAnchor> anchors(static_cast<std::size_t>(count));
      for (auto& a : anchors) a.position = rng.UniformReal(0.0, 1.0);
      for (auto& a : anchors) {
        a.gain_db = rng.UniformReal(cfg.volume_db_range.lo, cfg.volume_db_range.hi);
      }
      std::sort(anchors.begin(), anchors.end(),
                [](const VolumeAnchor& a, const VolumeAnchor& b) {
                  return a.position < b.position;
                });
      plan.volume_anchors = std::move(anchors);
    }
    if (rng.Bernoulli(cfg.p_eq)) plan.pre_reverb_eq = DrawEqGains(rng, cfg);
    if (!rir_ids.empty() && rng.Bernoulli(cfg.p_reverb)) {
      ReverbPlan reverb;
      const auto idx = rng.UniformInt(0, static_cast<std::int64_t>(rir_ids.size()) - 1);
      reverb.rir_id = rir_ids[static_cast<std::size_t>(idx)];
      reverb.params.drr_scale =
          rng.UniformReal(cfg.drr_scale_range.lo, cfg.drr_scale_range.hi);
      reverb.params.rt60_scale =
          rng.UniformReal(cfg.rt60_scale_range.lo, cfg.rt60_scale_range.hi);
      plan.reverb = std::move(reverb);
    }
  }
  if (kind != AssetKind::kRir && rng.Bernoulli(cfg.p_eq)) {
    plan.post_eq = DrawEqGains(rng, cfg);
  }
  return plan;
}

std::size_t DirectWindowSamples(int sample_rate_hz, double direct_window_ms) {
  return static_cast<std::size_t>(
      std::llround(direct_window_ms * 1e-3 * sample_rate_hz));
}

double DirectToReverberantRatio(const RoomImpulseResponse& rir,
                                double direct_window_ms) {
  const DirectSegment seg = FindDirectSegment(rir, direct_window_ms);
  const auto s = rir.clip().samples();
  double direct = 0.0, rest = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    (i >= seg.begin && i < seg.end ? direct : rest) += s[i] * s[i];
  }
  return direct / rest;
}

std::optional<double> EstimateT60(const RoomImpulseResponse& rir) {
  const auto s = rir.clip().samples();
  const std::size_t start = rir.direct_index();
  const std::size_t n = s.size() - start;

  // Schroeder backward integration of the energy from the direct path on.
  std::vector<double> edc(n);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    acc += s[start + i] * s[start + i];
    edc[i] = acc;
  }
  if (acc <= 0.0) return std::nullopt;
  std::vector<double> edc_db(n);
  for (std::size_t i = 0; i < n; ++i) {
    edc_db[i] = edc[i] > 0.0 ? 10.0 * std::log10(edc[i] / acc) : -1e9;
  }

  auto first_below = [&](double level_db) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < n; ++i) {
      if (edc_db[i] <= level_db) return i;
    }
    return std::nullopt;
  };

  const auto begin = first_below(-5.0);
  auto end = first_below(-35.0);
  if (!end) end = first_below(-25.0);
  if (!begin || !end || *end <= *begin + 1) return std::nullopt;

  // Least-squares line through (t, dB) for t in [begin, end].
  const double rate = rir.clip().sample_rate();
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const double count = static_cast<double>(*end - *begin + 1);
  for (std::size_t i = *begin; i <= *end; ++i) {
    const double t = static_cast<double>(i) / rate;
    st += t;
    sy += edc_db[i];
    stt += t * t;
    sty += t * edc_db[i];
  }
  const double slope = (count * sty - st * sy) / (count * stt - st * st);
  if (!(slope < 0.0)) return std::nullopt;
  return -60.0 / slope;
}

RoomImpulseResponse AugmentRir(const RoomImpulseResponse& rir,
                               const RirAugmentParams& params,
                               double direct_window_ms) {
  params.Validate();
  const DirectSegment seg = FindDirectSegment(rir, direct_window_ms);
  std::vector<double> h(rir.clip().samples().begin(), rir.clip().samples().end());
  const auto in_tail = [&](std::size_t i) { return i < seg.begin || i >= seg.end; };

  double tail_energy_in = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (in_tail(i)) tail_energy_in += h[i] * h[i];
  }
  if (tail_energy_in <= 0.0) return rir;  // pure impulse: nothing to reshape

  if (params.rt60_scale != 1.0) {
    if (const auto t60 = EstimateT60(rir)) {
      const double alpha = kDecayPerT60 / *t60 * (1.0 - 1.0 / params.rt60_scale);
      const double rate = rir.clip().sample_rate();
      for (std::size_t i = seg.end; i < h.size(); ++i) {
        const double t = static_cast<double>(i - rir.direct_index()) / rate;
        h[i] *= std::exp(alpha * t);
      }
    }
  }

  double tail_energy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (in_tail(i)) tail_energy += h[i] * h[i];
  }
  const double gain = std::sqrt(tail_energy_in / (params.drr_scale * tail_energy));
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (in_tail(i)) h[i] *= gain;
  }
  return RoomImpulseResponse(AudioClip(std::move(h), rir.clip().sample_rate()),
                             rir.direct_index());
}

AppliedPlan ApplyPlan(const AudioClip& clip, const AcousticPlan& plan,
                      const AcousticConfig& cfg, const RirLookup& rir_lookup) {
  AudioClip x = clip;
  if (plan.speed_ratio) x = Resample(x, *plan.speed_ratio);
  if (plan.volume_anchors && !plan.volume_anchors->empty()) {
    const double duration = x.duration_s();
    std::vector<GainAnchor> anchors;
    for (const VolumeAnchor& a : *plan.volume_anchors) {
      anchors.push_back({std::clamp(a.position, 0.0, 1.0) * duration, a.gain_db});
    }
    x = ApplyGainEnvelope(x, anchors);
  }
  if (plan.pre_reverb_eq) x = ApplyEq(x, *plan.pre_reverb_eq, cfg);
  if (plan.reverb) {
    const RoomImpulseResponse& rir = rir_lookup(plan.reverb->rir_id);
    const RoomImpulseResponse aug =
        AugmentRir(rir, plan.reverb->params, cfg.direct_window_ms);
    // The kernel starts at the direct path so reverberant speech stays
    // time-aligned with its dry source.
    const auto h = aug.clip().samples().subspan(aug.direct_index());
    x = FftConvolve(x, AudioClip(std::vector<double>(h.begin(), h.end()),
                                 aug.clip().sample_rate()));
  }
  if (plan.post_eq) x = ApplyEq(x, *plan.post_eq, cfg);

  AppliedPlan out{std::move(x), 1.0};
  const double peak = out.clip.PeakAbs();
  if (peak > kClipThreshold) {
    out.normalization_gain = kNormalizedPeak / peak;
    out.clip = out.clip.Scaled(out.normalization_gain);
  }
  return out;
}

}  // namespace acsim
