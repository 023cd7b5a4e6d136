// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/config.h"

#include <cmath>

#include <fmt/format.h>

#include "acsim/errors.h"

namespace acsim {
namespace {

void CheckProbability(std::string_view name, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(fmt::format("{} must be a probability in [0, 1], got {}",
                                  name, p));
  }
}

void CheckRange(std::string_view name, const Range& r) {
  if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi)) {
    throw ConfigError(
        fmt::format("{} must satisfy lo <= hi, got [{}, {}]", name, r.lo, r.hi));
  }
}

void CheckWithin(std::string_view name, const Range& r, double lo, double hi) {
  CheckRange(name, r);
  if (r.lo < lo || r.hi > hi) {
    throw ConfigError(fmt::format("{} must lie within [{}, {}], got [{}, {}]",
                                  name, lo, hi, r.lo, r.hi));
  }
}

}  // namespace

std::string_view AssetKindName(AssetKind kind) {
  switch (kind) {
    case AssetKind::kSpeech: return "speech";
    case AssetKind::kStaticNoise: return "static";
    case AssetKind::kEventNoise: return "event";
    case AssetKind::kRir: return "rir";
  }
  return "unknown";
}

std::size_t SimulationConfig::NumSamples() const {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

void SimulationConfig::Validate() const {
  if (!(duration_s > 0.0 && std::isfinite(duration_s))) {
    throw ConfigError(fmt::format("duration_s must be positive, got {}", duration_s));
  }
  if (sample_rate_hz <= 0) {
    throw ConfigError(
        fmt::format("sample_rate_hz must be positive, got {}", sample_rate_hz));
  }
  CheckProbability("p_speaker2", p_speaker2);
  CheckProbability("p_static", p_static);
  CheckProbability("p_event", p_event);
  CheckProbability("p_seg", p_seg);
  CheckProbability("p_overlap_removal", p_overlap_removal);
  // l2 <= 1 keeps every copy inside the source clip.
  if (!(l1 >= 0.0 && l1 <= l2 && l2 <= 1.0)) {
    throw ConfigError(
        fmt::format("split lengths must satisfy 0 <= l1 <= l2 <= 1, got l1={} l2={}",
                    l1, l2));
  }
  CheckRange("speaker1_level_dbfs", speaker1_level_dbfs);
  CheckRange("speech_level_db_range", speech_level_db_range);
  CheckRange("static_snr_db_range", static_snr_db_range);
  CheckRange("event_snr_db_range", event_snr_db_range);
  if (!std::isfinite(vad_threshold_dbfs)) {
    throw ConfigError("vad_threshold_dbfs must be finite");
  }
  if (!(vad_hangover_ms >= 0.0)) {
    throw ConfigError(
        fmt::format("vad_hangover_ms must be nonnegative, got {}", vad_hangover_ms));
  }

  const AcousticConfig& a = acoustic;
  CheckProbability("acoustic.p_speed", a.p_speed);
  CheckProbability("acoustic.p_volume", a.p_volume);
  CheckProbability("acoustic.p_eq", a.p_eq);
  CheckProbability("acoustic.p_reverb", a.p_reverb);
  CheckWithin("acoustic.speed_range", a.speed_range, 0.5, 2.0);
  if (a.max_volume_anchors < 0) {
    throw ConfigError("acoustic.max_volume_anchors must be nonnegative");
  }
  CheckRange("acoustic.volume_db_range", a.volume_db_range);
  CheckRange("acoustic.eq_gain_db_range", a.eq_gain_db_range);
  for (double c : a.eq_centers_hz) {
    if (!(c > 0.0 && c < sample_rate_hz / 2.0)) {
      throw ConfigError(
          fmt::format("acoustic.eq_centers_hz entry {} outside (0, {})", c,
                      sample_rate_hz / 2.0));
    }
  }
  if (!(a.eq_q > 0.0)) throw ConfigError("acoustic.eq_q must be positive");
  CheckWithin("acoustic.drr_scale_range", a.drr_scale_range, 0.5, 2.0);
  CheckWithin("acoustic.rt60_scale_range", a.rt60_scale_range, 0.5, 2.0);
  if (!(a.direct_window_ms > 0.0)) {
    throw ConfigError("acoustic.direct_window_ms must be positive");
  }
}

}  // namespace acsim
