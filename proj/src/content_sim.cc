// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/content_sim.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "acsim/errors.h"

namespace acsim {
namespace {

constexpr double kNormalizedPeak = 0.99;

double DbToAmplitude(double db) { return std::pow(10.0, db / 20.0); }

double Rms(const AudioClip& clip) {
  return clip.empty() ? 0.0 : std::sqrt(clip.Energy() / static_cast<double>(clip.size()));
}

AudioClip Slice(const AudioClip& clip, std::size_t begin, std::size_t end) {
  end = std::min(end, clip.size());
  begin = std::min(begin, end);
  return AudioClip(std::vector<double>(clip.samples().begin() + begin,
                                       clip.samples().begin() + end),
                   clip.sample_rate());
}

// Zero-pads or truncates to exactly `n` samples.
AudioClip FitLength(const AudioClip& clip, std::size_t n) {
  std::vector<double> out(n, 0.0);
  std::copy_n(clip.samples().begin(), std::min(n, clip.size()), out.begin());
  return AudioClip(std::move(out), clip.sample_rate());
}

// `n` samples read cyclically from `clip` starting at `offset`.
AudioClip Tile(const AudioClip& clip, std::size_t offset, std::size_t n) {
  std::vector<double> out(n, 0.0);
  if (!clip.empty()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = clip[(offset + i) % clip.size()];
  }
  return AudioClip(std::move(out), clip.sample_rate());
}

void Accumulate(std::vector<double>& acc, const AudioClip& clip) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += clip[i];
}

std::size_t SpeechSourceLength(const AcousticPlan& plan, std::size_t n) {
  const double speed = plan.speed_ratio.value_or(1.0);
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * speed));
}

std::size_t DrawOffset(RandomStream& rng, std::size_t available, std::size_t needed) {
  if (available <= needed) return 0;
  return static_cast<std::size_t>(
      rng.UniformInt(0, static_cast<std::int64_t>(available - needed)));
}

void CheckRate(const AudioClip& clip, const std::string& id, int rate) {
  if (clip.sample_rate() != rate) {
    throw ConfigError(fmt::format("asset '{}' is at {} Hz, simulation runs at {} Hz",
                                  id, clip.sample_rate(), rate));
  }
}

// A spliced speech track must keep at least one sample within this many dB of
// the augmented excerpt's peak; otherwise the split is redrawn.
constexpr double kMinSpliceLevelDb = -40.0;
constexpr int kMaxSplitAttempts = 32;

bool SpliceKeepsSpeech(const AudioClip& augmented, const SpliceMap& splice) {
  const double threshold = augmented.PeakAbs() * DbToAmplitude(kMinSpliceLevelDb);
  if (threshold <= 0.0) return false;
  for (const SpliceSegment& seg : splice) {
    for (std::size_t t = 0; t < seg.length; ++t) {
      if (std::abs(augmented[seg.src_start + t]) >= threshold) return true;
    }
  }
  return false;
}

TrackRecipe DrawSpeechTrack(std::uint64_t seed, const std::string& name,
                            const SpeechAsset& asset, const AssetCatalog& catalog,
                            const SimulationConfig& cfg,
                            const std::vector<std::string>& rir_ids) {
  const std::size_t n = cfg.NumSamples();
  TrackRecipe track;
  track.asset_id = asset.id;
  SeededStream plan_rng(DeriveStageSeed(seed, "plan." + name));
  track.plan = DrawAcousticPlan(plan_rng, AssetKind::kSpeech, cfg.acoustic, rir_ids);
  SeededStream excerpt_rng(DeriveStageSeed(seed, "excerpt." + name));
  const std::size_t source_len = SpeechSourceLength(track.plan, n);
  track.source_offset = DrawOffset(excerpt_rng, asset.clip.size(), source_len);

  CheckRate(asset.clip, asset.id, cfg.sample_rate_hz);
  const AudioClip augmented = FitLength(
      ApplyPlan(Slice(asset.clip, track.source_offset, track.source_offset + source_len),
                track.plan, cfg.acoustic,
                [&](const std::string& id) -> const RoomImpulseResponse& {
                  return catalog.FindRir(id);
                })
          .clip,
      n);
  // Attempt 0 uses the plain stage name so recipes without a redraw keep
  // their original draws.
  for (int attempt = 0; attempt < kMaxSplitAttempts; ++attempt) {
    const std::string stage =
        attempt == 0 ? "split." + name : fmt::format("split.{}.{}", name, attempt);
    SeededStream split_rng(DeriveStageSeed(seed, stage));
    track.splice = DrawSpliceMap(split_rng, n, cfg);
    if (SpliceKeepsSpeech(augmented, track.splice)) break;
  }
  return track;
}

struct RenderedTrack {
  AudioClip clip;
  double plan_normalization = 1.0;
};

RenderedTrack RenderSpeech(const TrackRecipe& track, const AssetCatalog& catalog,
                           const SimulationConfig& cfg) {
  const std::size_t n = cfg.NumSamples();
  const SpeechAsset& asset = catalog.FindSpeech(track.asset_id);
  CheckRate(asset.clip, asset.id, cfg.sample_rate_hz);
  const AudioClip excerpt =
      Slice(asset.clip, track.source_offset,
            track.source_offset + SpeechSourceLength(track.plan, n));
  const AppliedPlan applied = ApplyPlan(
      excerpt, track.plan, cfg.acoustic,
      [&](const std::string& id) -> const RoomImpulseResponse& { return catalog.FindRir(id); });
  ValidateSpliceMap(track.splice, n);
  return {ApplySpliceMap(FitLength(applied.clip, n), track.splice),
          applied.normalization_gain};
}

RenderedTrack RenderStatic(const TrackRecipe& track, const AssetCatalog& catalog,
                           const SimulationConfig& cfg) {
  const std::size_t n = cfg.NumSamples();
  const StaticNoiseAsset& asset = catalog.FindStaticNoise(track.asset_id);
  CheckRate(asset.clip, asset.id, cfg.sample_rate_hz);
  const AppliedPlan applied = ApplyPlan(Tile(asset.clip, track.source_offset, n),
                                        track.plan, cfg.acoustic, nullptr);
  return {FitLength(applied.clip, n), applied.normalization_gain};
}

RenderedTrack RenderEvent(const TrackRecipe& track, const AssetCatalog& catalog,
                          const SimulationConfig& cfg) {
  const std::size_t n = cfg.NumSamples();
  const EventNoiseAsset& asset = catalog.FindEventNoise(track.asset_id);
  CheckRate(asset.clip, asset.id, cfg.sample_rate_hz);
  const AudioClip excerpt =
      Slice(asset.clip, track.source_offset, track.source_offset + n);
  const AppliedPlan applied = ApplyPlan(excerpt, track.plan, cfg.acoustic, nullptr);
  std::vector<double> placed(n, 0.0);
  for (std::size_t i = 0; i < applied.clip.size(); ++i) {
    const std::size_t dst = track.placement_offset + i;
    if (dst >= n) break;
    placed[dst] = applied.clip[i];
  }
  return {AudioClip(std::move(placed), cfg.sample_rate_hz), applied.normalization_gain};
}

}  // namespace

ContentDraw SelectContent(RandomStream& rng, const AssetCatalog& catalog,
                          const SimulationConfig& cfg) {
  const auto& speech = catalog.speech();
  if (speech.empty()) throw ConfigError("speech catalog is empty");
  if (cfg.p_speaker2 > 0.0 && catalog.NumDistinctSpeakers() < 2) {
    throw ConfigError("a second speaker needs at least two distinct speaker ids");
  }

  ContentDraw draw;
  const auto pick = [&](std::size_t count) {
    return static_cast<std::size_t>(
        rng.UniformInt(0, static_cast<std::int64_t>(count) - 1));
  };
  const SpeechAsset& first = speech[pick(speech.size())];
  draw.speaker1 = first.id;

  if (rng.Bernoulli(cfg.p_speaker2)) {
    std::vector<const SpeechAsset*> others;
    for (const auto& s : speech) {
      if (s.speaker_id != first.speaker_id) others.push_back(&s);
    }
    draw.speaker2 = others[pick(others.size())]->id;
  }
  if (rng.Bernoulli(cfg.p_static)) {
    if (catalog.static_noise().empty()) {
      throw ConfigError("static noise requested but the catalog has none");
    }
    draw.static_noise = catalog.static_noise()[pick(catalog.static_noise().size())].id;
  }
  if (rng.Bernoulli(cfg.p_event)) {
    if (catalog.event_noise().empty()) {
      throw ConfigError("event noise requested but the catalog has none");
    }
    draw.event = catalog.event_noise()[pick(catalog.event_noise().size())].id;
  }
  return draw;
}

SpliceMap DrawSpliceMap(RandomStream& rng, std::size_t num_samples,
                        const SimulationConfig& cfg) {
  const auto total = static_cast<std::int64_t>(num_samples);
  SpliceMap map;
  std::int64_t i = 0, j = 0;
  double p = 0.0;
  while (p <= cfg.p_seg && i <= total && j <= total) {
    const double remaining = static_cast<double>(total - i);
    std::int64_t k = rng.UniformInt(static_cast<std::int64_t>(std::floor(cfg.l1 * remaining)),
                                    static_cast<std::int64_t>(std::floor(cfg.l2 * remaining)));
    j = rng.UniformInt(j, total);
    k = std::min(k, total - j);
    if (k > 0) {
      map.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                     static_cast<std::size_t>(k)});
    }
    i += k;
    j += k;
    p = rng.UniformReal(0.0, 1.0);
  }
  return map;
}

void ValidateSpliceMap(const SpliceMap& map, std::size_t num_samples) {
  std::size_t prev_end = 0;
  for (std::size_t s = 0; s < map.size(); ++s) {
    const SpliceSegment& seg = map[s];
    if (seg.src_start + seg.length > num_samples ||
        seg.dst_start + seg.length > num_samples) {
      throw DataError(fmt::format("splice segment {} exceeds {} samples", s, num_samples));
    }
    if (seg.dst_start < prev_end) {
      throw DataError(
          fmt::format("splice segment {} overlaps or precedes the previous one", s));
    }
    prev_end = seg.dst_start + seg.length;
  }
}

AudioClip ApplySpliceMap(const AudioClip& x, const SpliceMap& map) {
  ValidateSpliceMap(map, x.size());
  std::vector<double> y(x.size(), 0.0);
  for (const SpliceSegment& seg : map) {
    std::copy_n(x.samples().begin() + seg.src_start, seg.length,
                y.begin() + seg.dst_start);
  }
  return AudioClip(std::move(y), x.sample_rate());
}

std::pair<AudioClip, SpliceMap> RandomSplit(RandomStream& rng, const AudioClip& x,
                                            const SimulationConfig& cfg) {
  SpliceMap map = DrawSpliceMap(rng, x.size(), cfg);
  AudioClip y = ApplySpliceMap(x, map);
  return {std::move(y), std::move(map)};
}

std::vector<bool> DetectActivity(const AudioClip& clip, double threshold_dbfs,
                                 double hangover_ms) {
  const double threshold = DbToAmplitude(threshold_dbfs);
  const auto hangover = static_cast<std::ptrdiff_t>(
      std::llround(hangover_ms * 1e-3 * clip.sample_rate()));
  const auto n = static_cast<std::ptrdiff_t>(clip.size());
  std::vector<bool> active(clip.size(), false);
  // Distance to the nearest loud sample, scanned in both directions.
  std::ptrdiff_t last = -hangover - 1;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (std::abs(clip[i]) >= threshold) last = i;
    if (i - last <= hangover && last >= 0) active[i] = true;
  }
  std::ptrdiff_t next = -1;
  for (std::ptrdiff_t i = n - 1; i >= 0; --i) {
    if (std::abs(clip[i]) >= threshold) next = i;
    if (next >= 0 && next - i <= hangover) active[i] = true;
  }
  return active;
}

AudioClip RemoveEventOverlap(const AudioClip& event,
                             const std::vector<bool>& speech_activity,
                             double threshold_dbfs, double hangover_ms) {
  if (speech_activity.size() != event.size()) {
    throw ConfigError(fmt::format("event has {} samples but speech mask has {}",
                                  event.size(), speech_activity.size()));
  }
  std::vector<double> out(event.samples().begin(), event.samples().end());
  const std::vector<bool> event_active =
      DetectActivity(event, threshold_dbfs, hangover_ms);

  std::size_t i = 0;
  while (i < out.size()) {
    if (!event_active[i]) {
      if (speech_activity[i]) out[i] = 0.0;
      ++i;
      continue;
    }
    std::size_t end = i;
    bool overlaps = false;
    while (end < out.size() && event_active[end]) {
      overlaps = overlaps || speech_activity[end];
      ++end;
    }
    if (overlaps) std::fill(out.begin() + i, out.begin() + end, 0.0);
    i = end;
  }
  return AudioClip(std::move(out), event.sample_rate());
}

SimulationConfig ScenarioConfig(const SimulationConfig& cfg,
                                const ScenarioSpec& scenario) {
  scenario.Validate();
  SimulationConfig out = cfg;
  out.p_speaker2 = scenario.speakers == 2 ? 1.0 : 0.0;
  out.p_static = scenario.static_allowed ? 1.0 : 0.0;
  out.p_event = scenario.event_allowed ? 1.0 : 0.0;
  out.acoustic.p_reverb = scenario.reverb_allowed ? 1.0 : 0.0;
  return out;
}

void CheckScenarioSupported(const AssetCatalog& catalog,
                            const ScenarioSpec& scenario) {
  scenario.Validate();
  const std::string tag = scenario.Tag();
  if (catalog.speech().empty()) {
    throw ConfigError(fmt::format("scenario {} needs speech assets", tag));
  }
  if (scenario.speakers == 2 && catalog.NumDistinctSpeakers() < 2) {
    throw ConfigError(
        fmt::format("scenario {} needs at least two distinct speakers", tag));
  }
  if (scenario.static_allowed && catalog.static_noise().empty()) {
    throw ConfigError(fmt::format("scenario {} needs static noise assets", tag));
  }
  if (scenario.event_allowed && catalog.event_noise().empty()) {
    throw ConfigError(fmt::format("scenario {} needs event noise assets", tag));
  }
  if (scenario.reverb_allowed && catalog.rirs().empty()) {
    throw ConfigError(fmt::format("scenario {} needs RIR assets", tag));
  }
}

ExampleRecipe DrawRecipe(std::uint64_t seed, const AssetCatalog& catalog,
                         const SimulationConfig& cfg, const ScenarioSpec& scenario) {
  CheckScenarioSupported(catalog, scenario);
  const SimulationConfig eff = ScenarioConfig(cfg, scenario);
  eff.Validate();
  const std::size_t n = eff.NumSamples();
  const std::vector<std::string> rir_ids =
      scenario.reverb_allowed ? catalog.RirIds() : std::vector<std::string>{};

  ExampleRecipe recipe;
  recipe.seed = seed;
  recipe.scenario_tag = scenario.Tag();

  SeededStream select_rng(DeriveStageSeed(seed, "select"));
  const ContentDraw draw = SelectContent(select_rng, catalog, eff);

  recipe.speaker1 = DrawSpeechTrack(seed, "speaker1", catalog.FindSpeech(draw.speaker1),
                                    catalog, eff, rir_ids);
  if (draw.speaker2) {
    recipe.speaker2 = DrawSpeechTrack(
        seed, "speaker2", catalog.FindSpeech(*draw.speaker2), catalog, eff, rir_ids);
  }
  if (draw.static_noise) {
    const StaticNoiseAsset& asset = catalog.FindStaticNoise(*draw.static_noise);
    TrackRecipe track;
    track.asset_id = asset.id;
    SeededStream plan_rng(DeriveStageSeed(seed, "plan.static"));
    track.plan = DrawAcousticPlan(plan_rng, AssetKind::kStaticNoise, eff.acoustic, {});
    SeededStream excerpt_rng(DeriveStageSeed(seed, "excerpt.static"));
    track.source_offset = DrawOffset(excerpt_rng, asset.clip.size(), n);
    recipe.static_noise = std::move(track);
  }
  if (draw.event) {
    const EventNoiseAsset& asset = catalog.FindEventNoise(*draw.event);
    TrackRecipe track;
    track.asset_id = asset.id;
    SeededStream plan_rng(DeriveStageSeed(seed, "plan.event"));
    track.plan = DrawAcousticPlan(plan_rng, AssetKind::kEventNoise, eff.acoustic, {});
    SeededStream excerpt_rng(DeriveStageSeed(seed, "excerpt.event"));
    if (asset.clip.size() >= n) {
      track.source_offset = DrawOffset(excerpt_rng, asset.clip.size(), n);
    } else {
      track.placement_offset = DrawOffset(excerpt_rng, n, asset.clip.size());
    }
    recipe.event = std::move(track);
  }

  // All four levels are drawn unconditionally so one track's presence never
  // shifts another's level.
  SeededStream level_rng(DeriveStageSeed(seed, "levels"));
  const double s1_level =
      level_rng.UniformReal(eff.speaker1_level_dbfs.lo, eff.speaker1_level_dbfs.hi);
  const double s2_level =
      level_rng.UniformReal(eff.speech_level_db_range.lo, eff.speech_level_db_range.hi);
  const double static_snr =
      level_rng.UniformReal(eff.static_snr_db_range.lo, eff.static_snr_db_range.hi);
  const double event_snr =
      level_rng.UniformReal(eff.event_snr_db_range.lo, eff.event_snr_db_range.hi);
  recipe.speaker1.level_db = s1_level;
  if (recipe.speaker2) recipe.speaker2->level_db = s2_level;
  if (recipe.static_noise) recipe.static_noise->level_db = static_snr;
  if (recipe.event) recipe.event->level_db = event_snr;

  if (recipe.event) {
    SeededStream overlap_rng(DeriveStageSeed(seed, "overlap"));
    recipe.overlap_removal = overlap_rng.Bernoulli(eff.p_overlap_removal);
  }
  return recipe;
}

MixtureExample RenderExample(const ExampleRecipe& recipe,
                             const AssetCatalog& catalog,
                             const SimulationConfig& cfg) {
  cfg.Validate();
  const std::size_t n = cfg.NumSamples();
  const int rate = cfg.sample_rate_hz;
  MixtureExample ex;
  ex.metadata.recipe = recipe;
  RenderInfo& info = ex.metadata.render;

  // Speech.
  RenderedTrack s1 = RenderSpeech(recipe.speaker1, catalog, cfg);
  info.speaker1_plan_normalization = s1.plan_normalization;
  const double s1_rms = Rms(s1.clip);
  const double s1_target_rms = DbToAmplitude(recipe.speaker1.level_db);
  info.speaker1_gain = s1_rms > 0.0 ? s1_target_rms / s1_rms : 1.0;
  AudioClip target1 = s1.clip.Scaled(info.speaker1_gain);

  AudioClip target2 = AudioClip::Silence(n, rate);
  if (recipe.speaker2) {
    RenderedTrack s2 = RenderSpeech(*recipe.speaker2, catalog, cfg);
    info.speaker2_plan_normalization = s2.plan_normalization;
    const double reference = Rms(target1) > 0.0 ? Rms(target1) : s1_target_rms;
    const double s2_rms = Rms(s2.clip);
    info.speaker2_gain =
        s2_rms > 0.0 ? reference * DbToAmplitude(recipe.speaker2->level_db) / s2_rms : 1.0;
    target2 = s2.clip.Scaled(info.speaker2_gain);
  }

  std::vector<double> speech(n, 0.0);
  Accumulate(speech, target1);
  Accumulate(speech, target2);
  const AudioClip speech_sum(speech, rate);
  const double speech_rms = Rms(speech_sum) > 0.0 ? Rms(speech_sum) : s1_target_rms;

  const auto noise_gain = [&](const AudioClip& clip, double snr_db) {
    const double rms = Rms(clip);
    return rms > 0.0 ? speech_rms / (rms * DbToAmplitude(snr_db)) : 1.0;
  };

  // Noise.
  AudioClip static_track = AudioClip::Silence(n, rate);
  if (recipe.static_noise) {
    RenderedTrack st = RenderStatic(*recipe.static_noise, catalog, cfg);
    info.static_plan_normalization = st.plan_normalization;
    info.static_gain = noise_gain(st.clip, recipe.static_noise->level_db);
    static_track = st.clip.Scaled(info.static_gain);
  }
  AudioClip event_track = AudioClip::Silence(n, rate);
  if (recipe.event) {
    RenderedTrack ev = RenderEvent(*recipe.event, catalog, cfg);
    info.event_plan_normalization = ev.plan_normalization;
    info.event_gain = noise_gain(ev.clip, recipe.event->level_db);
    event_track = ev.clip.Scaled(info.event_gain);
    if (recipe.overlap_removal) {
      event_track = RemoveEventOverlap(
          event_track,
          DetectActivity(speech_sum, cfg.vad_threshold_dbfs, cfg.vad_hangover_ms),
          cfg.vad_threshold_dbfs, cfg.vad_hangover_ms);
    }
  }

  // Final clipping guard, applied to every track before summation so the
  // additive identity holds on the stored signals.
  double peak = std::max(target1.PeakAbs(), target2.PeakAbs());
  for (std::size_t i = 0; i < n; ++i) {
    const double m = (target1[i] + target2[i]) + (static_track[i] + event_track[i]);
    peak = std::max(peak, std::abs(m));
  }
  if (peak > 1.0) {
    info.final_normalization = kNormalizedPeak / peak;
    target1 = target1.Scaled(info.final_normalization);
    target2 = target2.Scaled(info.final_normalization);
    static_track = static_track.Scaled(info.final_normalization);
    event_track = event_track.Scaled(info.final_normalization);
  }

  std::vector<double> noise(n), mixture(n);
  for (std::size_t i = 0; i < n; ++i) {
    noise[i] = static_track[i] + event_track[i];
    mixture[i] = (target1[i] + target2[i]) + noise[i];
  }
  ex.noise = AudioClip(std::move(noise), rate);
  ex.mixture = AudioClip(std::move(mixture), rate);
  ex.targets = {std::move(target1), std::move(target2)};
  return ex;
}

MixtureExample AssembleExample(std::uint64_t seed, const AssetCatalog& catalog,
                               const SimulationConfig& cfg,
                               const ScenarioSpec& scenario) {
  return RenderExample(DrawRecipe(seed, catalog, cfg, scenario), catalog, cfg);
}

}  // namespace acsim
