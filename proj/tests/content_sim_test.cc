// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "acsim/content_sim.h"
#include "acsim/errors.h"
#include "oracles.h"
#include "test_util.h"

namespace acsim {
namespace {

using testing::ReferenceRandomSplit;
using testing::ScriptedStream;
using testing::SyntheticCatalog;

const AssetCatalog& Catalog() {
  static const AssetCatalog* catalog = new AssetCatalog(SyntheticCatalog());
  return *catalog;
}

// Random script: integer offsets spread over each call's range and unit draws.
struct Script {
  std::vector<std::int64_t> offsets;
  std::vector<double> units;
};

Script MakeScript(std::mt19937_64& gen, std::size_t steps) {
  Script s;
  std::uniform_int_distribution<std::int64_t> off(0, 4000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < 2 * steps; ++i) s.offsets.push_back(off(gen));
  for (std::size_t i = 0; i < steps; ++i) s.units.push_back(unit(gen));
  return s;
}

void Load(ScriptedStream& stream, const Script& s) {
  for (auto o : s.offsets) stream.PushIntOffset(o);
  for (auto u : s.units) stream.PushUnit(u);
}

TEST(RandomSplitTest, MatchesReferenceOnScriptedTraces) {
  std::mt19937_64 gen(11);
  SimulationConfig cfg;
  for (int trace = 0; trace < 100; ++trace) {
    const std::size_t T = 500 + 37 * trace;
    std::vector<double> x(T);
    for (std::size_t i = 0; i < T; ++i) x[i] = 1.0 + static_cast<double>(i);
    const Script script = MakeScript(gen, 64);

    ScriptedStream lib_stream;
    Load(lib_stream, script);
    const auto [y, map] = RandomSplit(lib_stream, AudioClip(x, 16000), cfg);

    ScriptedStream ref_stream;
    Load(ref_stream, script);
    const auto ref = ReferenceRandomSplit(
        x, cfg.l1, cfg.l2, cfg.p_seg,
        [&](std::int64_t lo, std::int64_t hi) { return ref_stream.UniformInt(lo, hi); },
        [&](double lo, double hi) { return ref_stream.UniformReal(lo, hi); });

    ASSERT_EQ(std::vector<double>(y.samples().begin(), y.samples().end()), ref.y)
        << "trace " << trace;
    std::vector<std::vector<std::int64_t>> nonempty;
    for (const auto& st : ref.steps) {
      if (st[2] > 0) nonempty.push_back(st);
    }
    ASSERT_EQ(map.size(), nonempty.size()) << "trace " << trace;
    for (std::size_t s = 0; s < map.size(); ++s) {
      EXPECT_EQ(static_cast<std::int64_t>(map[s].src_start), nonempty[s][0]);
      EXPECT_EQ(static_cast<std::int64_t>(map[s].dst_start), nonempty[s][1]);
      EXPECT_EQ(static_cast<std::int64_t>(map[s].length), nonempty[s][2]);
    }
    // Both consumed the same bounds in the same order.
    ASSERT_EQ(lib_stream.int_calls().size(), ref_stream.int_calls().size());
    for (std::size_t c = 0; c < lib_stream.int_calls().size(); ++c) {
      EXPECT_EQ(lib_stream.int_calls()[c].lo, ref_stream.int_calls()[c].lo);
      EXPECT_EQ(lib_stream.int_calls()[c].hi, ref_stream.int_calls()[c].hi);
    }
  }
}

TEST(RandomSplitTest, FirstDrawBoundsFollowL1L2) {
  ScriptedStream s;
  s.PushIntOffset(0);
  s.PushIntOffset(0);
  s.PushUnit(0.99);
  SimulationConfig cfg;
  DrawSpliceMap(s, 1000, cfg);
  ASSERT_GE(s.int_calls().size(), 2u);
  EXPECT_EQ(s.int_calls()[0].lo, 200);
  EXPECT_EQ(s.int_calls()[0].hi, 1000);
  EXPECT_EQ(s.int_calls()[1].lo, 0);
  EXPECT_EQ(s.int_calls()[1].hi, 1000);
}

TEST(RandomSplitTest, OutputPropertiesOnSeededStream) {
  SimulationConfig cfg;
  std::vector<double> x(8000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + static_cast<double>(i % 97);
  const AudioClip clip(x, 16000);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SeededStream rng(seed);
    const auto [y, map] = RandomSplit(rng, clip, cfg);
    ASSERT_EQ(y.size(), clip.size());
    EXPECT_NO_THROW(ValidateSpliceMap(map, clip.size()));
    // Source positions advance monotonically and never overlap.
    std::size_t src_end = 0;
    for (const SpliceSegment& seg : map) {
      EXPECT_GE(seg.src_start, src_end);
      src_end = seg.src_start + seg.length;
      for (std::size_t t = 0; t < seg.length; ++t) {
        ASSERT_EQ(y[seg.dst_start + t], x[seg.src_start + t]);
      }
    }
  }
}

TEST(RandomSplitTest, EmptyInputGivesEmptyOutput) {
  SeededStream rng(1);
  const auto [y, map] = RandomSplit(rng, AudioClip({}, 16000), SimulationConfig{});
  EXPECT_TRUE(y.empty());
  EXPECT_TRUE(map.empty());
}

TEST(SpliceMapTest, ValidationRejectsBadMaps) {
  EXPECT_THROW(ValidateSpliceMap({{0, 90, 20}}, 100), DataError);
  EXPECT_THROW(ValidateSpliceMap({{95, 0, 10}}, 100), DataError);
  EXPECT_THROW(ValidateSpliceMap({{0, 10, 10}, {20, 15, 5}}, 100), DataError);
  EXPECT_NO_THROW(ValidateSpliceMap({{0, 10, 10}, {20, 20, 5}}, 100));
}

TEST(ActivityTest, ThresholdAndHangover) {
  std::vector<double> x(1000, 0.0);
  x[500] = 0.5;
  // 1 ms hangover at 16 kHz is 16 samples either side.
  const auto active = DetectActivity(AudioClip(x, 16000), -40.0, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(active[i], i >= 484 && i <= 516) << i;
  }
  x[500] = 0.009;  // below -40 dBFS
  const auto quiet = DetectActivity(AudioClip(x, 16000), -40.0, 1.0);
  for (bool a : quiet) EXPECT_FALSE(a);
}

TEST(OverlapRemovalTest, ZeroesSegmentsTouchingSpeech) {
  std::vector<double> ev(2000, 0.0);
  for (std::size_t i = 100; i < 300; ++i) ev[i] = 0.3;   // clear of speech
  for (std::size_t i = 900; i < 1200; ++i) ev[i] = 0.3;  // overlaps speech
  std::vector<bool> speech(2000, false);
  for (std::size_t i = 1100; i < 1500; ++i) speech[i] = true;
  const AudioClip out = RemoveEventOverlap(AudioClip(ev, 16000), speech, -40.0, 1.0);
  for (std::size_t i = 100; i < 300; ++i) EXPECT_EQ(out[i], 0.3);
  for (std::size_t i = 880; i < 1220; ++i) EXPECT_EQ(out[i], 0.0);
  for (std::size_t i = 0; i < 2000; ++i) {
    if (speech[i]) EXPECT_EQ(out[i], 0.0);
  }
  EXPECT_THROW(RemoveEventOverlap(AudioClip(ev, 16000), std::vector<bool>(5), -40, 1),
               ConfigError);
}

TEST(SelectContentTest, SecondSpeakerDiffers) {
  SimulationConfig cfg;
  cfg.p_speaker2 = 1.0;
  std::map<std::string, std::string> speaker_of;
  for (const SpeechAsset& s : Catalog().speech()) speaker_of[s.id] = s.speaker_id;
  SeededStream rng(3);
  for (int i = 0; i < 500; ++i) {
    const ContentDraw d = SelectContent(rng, Catalog(), cfg);
    ASSERT_TRUE(d.speaker2);
    EXPECT_NE(speaker_of[d.speaker1], speaker_of[*d.speaker2]);
  }
}

TEST(SelectContentTest, ProbabilitiesAreIndependent) {
  SimulationConfig cfg;
  cfg.p_speaker2 = 0.5;
  cfg.p_static = 0.25;
  cfg.p_event = 0.75;
  SeededStream rng(4);
  const int n = 20000;
  int s2 = 0, st = 0, ev = 0, both = 0;
  for (int i = 0; i < n; ++i) {
    const ContentDraw d = SelectContent(rng, Catalog(), cfg);
    s2 += d.speaker2.has_value();
    st += d.static_noise.has_value();
    ev += d.event.has_value();
    both += d.static_noise && d.event;
  }
  EXPECT_NEAR(s2 / double(n), 0.5, 0.015);
  EXPECT_NEAR(st / double(n), 0.25, 0.015);
  EXPECT_NEAR(ev / double(n), 0.75, 0.015);
  EXPECT_NEAR(both / double(n), 0.25 * 0.75, 0.015);
}

TEST(SelectContentTest, RejectsUnsatisfiableCatalogs) {
  AssetCatalog one_speaker;
  one_speaker.AddSpeech({"a", "spk", "a.wav", AudioClip({0.1}, 16000)});
  SimulationConfig cfg;
  SeededStream rng(1);
  EXPECT_THROW(SelectContent(rng, one_speaker, cfg), ConfigError);
  EXPECT_THROW(SelectContent(rng, AssetCatalog{}, cfg), ConfigError);
}

TEST(ScenarioTest, TagsRoundTrip) {
  const auto all = ScenarioSpec::All();
  ASSERT_EQ(all.size(), 8u);
  const char* tags[] = {"D-All", "D-NE", "D-NR", "D-N", "S-All", "S-NE", "S-NR", "S-N"};
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(all[i].Tag(), tags[i]);
    EXPECT_EQ(ScenarioSpec::FromTag(tags[i]), all[i]);
  }
  EXPECT_THROW(ScenarioSpec::FromTag("X-All"), ConfigError);
  EXPECT_THROW((ScenarioSpec{3, true, true, true}.Validate()), ConfigError);
  EXPECT_THROW((ScenarioSpec{2, true, true, false}.Validate()), ConfigError);
}

TEST(AssembleExampleTest, ScenarioConstraintsAndMixingIdentity) {
  const SimulationConfig cfg;
  for (const ScenarioSpec& spec : ScenarioSpec::All()) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const MixtureExample ex = AssembleExample(seed * 7919 + 1, Catalog(), cfg, spec);
      const ExampleRecipe& r = ex.metadata.recipe;
      EXPECT_EQ(r.scenario_tag, spec.Tag());
      EXPECT_EQ(r.speaker2.has_value(), spec.speakers == 2);
      EXPECT_TRUE(r.static_noise.has_value());
      EXPECT_EQ(r.event.has_value(), spec.event_allowed);
      EXPECT_EQ(r.speaker1.plan.reverb.has_value(), spec.reverb_allowed);
      if (r.speaker2) EXPECT_EQ(r.speaker2->plan.reverb.has_value(), spec.reverb_allowed);

      ASSERT_EQ(ex.mixture.size(), cfg.NumSamples());
      ASSERT_EQ(ex.targets[0].size(), cfg.NumSamples());
      ASSERT_EQ(ex.targets[1].size(), cfg.NumSamples());
      for (std::size_t i = 0; i < ex.mixture.size(); ++i) {
        ASSERT_EQ(ex.mixture[i], (ex.targets[0][i] + ex.targets[1][i]) + ex.noise[i]);
      }
      EXPECT_LE(ex.mixture.PeakAbs(), 1.0);
      if (spec.speakers == 1) EXPECT_EQ(ex.targets[1].Energy(), 0.0);
      EXPECT_GT(ex.targets[0].Energy(), 0.0);
    }
  }
}

TEST(AssembleExampleTest, SpeechTracksAreNeverSilent) {
  // The synthetic utterances contain exact-zero pauses, so a short split
  // can land entirely in one unless it is redrawn.
  const SimulationConfig cfg;
  for (const char* tag : {"D-N", "S-N"}) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      const MixtureExample ex = AssembleExample(seed, Catalog(), cfg, ScenarioSpec::FromTag(tag));
      EXPECT_GT(ex.targets[0].PeakAbs(), 0.0) << tag << " " << seed;
      if (tag[0] == 'D') EXPECT_GT(ex.targets[1].PeakAbs(), 0.0) << tag << " " << seed;
    }
  }
}

TEST(AssembleExampleTest, SnWithoutAugmentationIsSpeechPlusNoise) {
  SimulationConfig cfg;
  cfg.acoustic.p_speed = cfg.acoustic.p_volume = cfg.acoustic.p_eq = 0.0;
  const ScenarioSpec spec = ScenarioSpec::FromTag("S-N");
  const MixtureExample ex = AssembleExample(42, Catalog(), cfg, spec);
  const ExampleRecipe& r = ex.metadata.recipe;
  EXPECT_TRUE(r.speaker1.plan.IsIdentity());
  EXPECT_TRUE(r.static_noise->plan.IsIdentity());
  const RenderInfo& info = ex.metadata.render;
  EXPECT_EQ(info.event_gain, 0.0);

  // Independent reconstruction of both tracks.
  const std::size_t n = cfg.NumSamples();
  const AudioClip& src = Catalog().FindSpeech(r.speaker1.asset_id).clip;
  std::vector<double> speech(n, 0.0);
  for (const SpliceSegment& s : r.speaker1.splice) {
    for (std::size_t t = 0; t < s.length; ++t) {
      speech[s.dst_start + t] = src[r.speaker1.source_offset + s.src_start + t] *
                                info.speaker1_gain * info.final_normalization;
    }
  }
  const AudioClip& st = Catalog().FindStaticNoise(r.static_noise->asset_id).clip;
  double speech_energy = 0.0, noise_energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double noise = st[(r.static_noise->source_offset + i) % st.size()] *
                         info.static_gain * info.final_normalization;
    EXPECT_NEAR(ex.targets[0][i], speech[i], 1e-12);
    EXPECT_NEAR(ex.mixture[i], speech[i] + noise, 1e-12);
    EXPECT_EQ(ex.targets[1][i], 0.0);
    speech_energy += speech[i] * speech[i];
    noise_energy += noise * noise;
  }
  EXPECT_NEAR(10.0 * std::log10(speech_energy / noise_energy), r.static_noise->level_db, 1e-9);
  // Speaker 1 level in dBFS RMS (before any final normalization).
  EXPECT_NEAR(20.0 * std::log10(std::sqrt(speech_energy / n) / info.final_normalization),
              r.speaker1.level_db, 1e-9);
}

TEST(AssembleExampleTest, SecondSpeakerLevelIsRelative) {
  const SimulationConfig cfg;
  const MixtureExample ex = AssembleExample(5, Catalog(), cfg, ScenarioSpec::FromTag("D-N"));
  const double e1 = ex.targets[0].Energy(), e2 = ex.targets[1].Energy();
  EXPECT_NEAR(10.0 * std::log10(e2 / e1), ex.metadata.recipe.speaker2->level_db, 1e-9);
}

TEST(AssembleExampleTest, DeterministicAndNoiseDrawsIsolated) {
  const SimulationConfig cfg;
  const ScenarioSpec spec = ScenarioSpec::FromTag("D-All");
  const MixtureExample a = AssembleExample(77, Catalog(), cfg, spec);
  const MixtureExample b = AssembleExample(77, Catalog(), cfg, spec);
  EXPECT_EQ(a.mixture, b.mixture);
  EXPECT_EQ(a.metadata, b.metadata);

  // Different noise settings leave the speech decisions untouched.
  SimulationConfig other = cfg;
  other.static_snr_db_range = {0.0, 1.0};
  other.event_snr_db_range = {10.0, 11.0};
  other.p_overlap_removal = 1.0;
  const ExampleRecipe r1 = DrawRecipe(77, Catalog(), cfg, spec);
  const ExampleRecipe r2 = DrawRecipe(77, Catalog(), other, spec);
  EXPECT_EQ(r1.speaker1, r2.speaker1);
  EXPECT_EQ(r1.speaker2, r2.speaker2);
  EXPECT_NE(r1.static_noise->level_db, r2.static_noise->level_db);
}

TEST(AssembleExampleTest, RenderReplaysRecipe) {
  const SimulationConfig cfg;
  const ScenarioSpec spec = ScenarioSpec::FromTag("D-All");
  const MixtureExample ex = AssembleExample(1234, Catalog(), cfg, spec);
  const MixtureExample again = RenderExample(ex.metadata.recipe, Catalog(), cfg);
  EXPECT_EQ(ex.mixture, again.mixture);
  EXPECT_EQ(ex.targets[0], again.targets[0]);
  EXPECT_EQ(ex.targets[1], again.targets[1]);
}

TEST(AssembleExampleTest, UnsupportedScenarioThrows) {
  AssetCatalog no_rir;
  for (const SpeechAsset& s : Catalog().speech()) no_rir.AddSpeech(s);
  for (const StaticNoiseAsset& s : Catalog().static_noise()) no_rir.AddStaticNoise(s);
  EXPECT_THROW(CheckScenarioSupported(no_rir, ScenarioSpec::FromTag("D-NR")), ConfigError);
  EXPECT_THROW(CheckScenarioSupported(no_rir, ScenarioSpec::FromTag("S-NE")), ConfigError);
  EXPECT_NO_THROW(CheckScenarioSupported(no_rir, ScenarioSpec::FromTag("D-N")));
}

TEST(ConfigTest, ValidateRejectsBadValues) {
  SimulationConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.p_seg = 1.5;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.l1 = 0.8;
  c.l2 = 0.5;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.acoustic.speed_range = {0.3, 1.0};
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.static_snr_db_range = {5.0, 1.0};
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.acoustic.eq_centers_hz = {100.0, 9000.0};
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_EQ(SimulationConfig{}.NumSamples(), 80000u);
}

TEST(CatalogTest, DuplicateIdsAndLookups) {
  AssetCatalog c;
  c.AddSpeech({"a", "s1", "a.wav", AudioClip({0.1}, 16000)});
  try {
    c.AddStaticNoise({"a", "b.wav", AudioClip({0.1}, 16000)});
    FAIL() << "expected CatalogError";
  } catch (const CatalogError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
  EXPECT_THROW(c.FindStaticNoise("a"), CatalogError);
  EXPECT_THROW(c.FindSpeech("zzz"), CatalogError);
  EXPECT_EQ(c.FindSpeech("a").speaker_id, "s1");
  EXPECT_EQ(Catalog().NumDistinctSpeakers(), 4u);
  EXPECT_EQ(Catalog().RirIds().size(), 2u);
}

}  // namespace
}  // namespace acsim
