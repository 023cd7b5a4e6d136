// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_CONTENT_SIM_H_
#define ACSIM_CONTENT_SIM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acsim/acoustic_sim.h"
#include "acsim/audio_clip.h"
#include "acsim/catalog.h"
#include "acsim/config.h"
#include "acsim/random.h"
#include "acsim/scenario.h"

namespace acsim {

// Asset ids chosen for one example.
struct ContentDraw {
  std::string speaker1;
  std::optional<std::string> speaker2;
  std::optional<std::string> static_noise;
  std::optional<std::string> event;

  friend bool operator==(const ContentDraw&, const ContentDraw&) = default;
};

// Speaker 1 always; speaker 2 (a different speaker id), static and event noise
// each with their own independent probability.
ContentDraw SelectContent(RandomStream& rng, const AssetCatalog& catalog,
                          const SimulationConfig& cfg);

// Copy of x[src_start, src_start + length) to y[dst_start, ...).
struct SpliceSegment {
  std::size_t src_start = 0;
  std::size_t dst_start = 0;
  std::size_t length = 0;

  friend bool operator==(const SpliceSegment&, const SpliceSegment&) = default;
};
using SpliceMap = std::vector<SpliceSegment>;

// Index arithmetic of the random split for a clip of `num_samples`:
//
//   i, j, p = 0
//   while p <= p_seg and i <= T and j <= T:
//     k = randint(floor(l1 (T - i)), floor(l2 (T - i)))
//     j = randint(j, T); k = min(k, T - j)
//     y[j:j+k] = x[i:i+k]; i += k; j += k
//     p = uniform(0, 1)
//
// Empty copies are not recorded.
SpliceMap DrawSpliceMap(RandomStream& rng, std::size_t num_samples,
                        const SimulationConfig& cfg);

// Throws DataError if a segment leaves [0, size) or destinations overlap or
// are out of order.
void ValidateSpliceMap(const SpliceMap& map, std::size_t num_samples);

AudioClip ApplySpliceMap(const AudioClip& x, const SpliceMap& map);

// Splices segments of x into silence; output has the same length as x.
std::pair<AudioClip, SpliceMap> RandomSplit(RandomStream& rng, const AudioClip& x,
                                            const SimulationConfig& cfg);

// A sample is active when some sample within `hangover_ms` of it has
// magnitude at or above `threshold_dbfs`.
std::vector<bool> DetectActivity(const AudioClip& clip, double threshold_dbfs,
                                 double hangover_ms);

// Zeroes every event sample where speech is active and every event segment
// (maximal run of DetectActivity on the event) that touches active speech.
AudioClip RemoveEventOverlap(const AudioClip& event,
                             const std::vector<bool>& speech_activity,
                             double threshold_dbfs = -40.0,
                             double hangover_ms = 50.0);

// Random decisions for one source track.
struct TrackRecipe {
  std::string asset_id;
  // Start of the excerpt taken from the asset.
  std::size_t source_offset = 0;
  // Where a short event is placed within the example; 0 for other tracks.
  std::size_t placement_offset = 0;
  AcousticPlan plan;
  // Speech only.
  SpliceMap splice;
  // dBFS for speaker 1, dB relative to speaker 1 for speaker 2, SNR in dB
  // against the summed speech for noise.
  double level_db = 0.0;

  friend bool operator==(const TrackRecipe&, const TrackRecipe&) = default;
};

// Every random decision behind one example. Rendering a recipe is
// deterministic, so a recipe alone replays its example.
struct ExampleRecipe {
  std::uint64_t seed = 0;
  std::string scenario_tag;
  TrackRecipe speaker1;
  std::optional<TrackRecipe> speaker2;
  std::optional<TrackRecipe> static_noise;
  std::optional<TrackRecipe> event;
  bool overlap_removal = false;

  friend bool operator==(const ExampleRecipe&, const ExampleRecipe&) = default;
};

// Values derived while rendering.
struct RenderInfo {
  // Linear mixing gain per track (0 when the track is absent).
  double speaker1_gain = 0.0;
  double speaker2_gain = 0.0;
  double static_gain = 0.0;
  double event_gain = 0.0;
  // Clipping normalization from ApplyPlan per track (1 when absent).
  double speaker1_plan_normalization = 1.0;
  double speaker2_plan_normalization = 1.0;
  double static_plan_normalization = 1.0;
  double event_plan_normalization = 1.0;
  // Gain applied to every track so the mixture peak stays at or below 0.99.
  double final_normalization = 1.0;

  friend bool operator==(const RenderInfo&, const RenderInfo&) = default;
};

struct ExampleMetadata {
  ExampleRecipe recipe;
  RenderInfo render;

  friend bool operator==(const ExampleMetadata&, const ExampleMetadata&) = default;
};

// mixture == (targets[0] + targets[1]) + noise, sample by sample.
struct MixtureExample {
  AudioClip mixture;
  std::array<AudioClip, 2> targets;
  // Static plus event noise as mixed.
  AudioClip noise;
  ExampleMetadata metadata;
};

// Applies scenario constraints to `cfg`: speaker count, static noise always,
// event and reverb forced on when allowed and off otherwise.
SimulationConfig ScenarioConfig(const SimulationConfig& cfg,
                                const ScenarioSpec& scenario);

// Throws ConfigError when the catalog cannot satisfy the scenario.
void CheckScenarioSupported(const AssetCatalog& catalog,
                            const ScenarioSpec& scenario);

ExampleRecipe DrawRecipe(std::uint64_t seed, const AssetCatalog& catalog,
                         const SimulationConfig& cfg, const ScenarioSpec& scenario);

MixtureExample RenderExample(const ExampleRecipe& recipe,
                             const AssetCatalog& catalog,
                             const SimulationConfig& cfg);

// DrawRecipe followed by RenderExample.
MixtureExample AssembleExample(std::uint64_t seed, const AssetCatalog& catalog,
                               const SimulationConfig& cfg,
                               const ScenarioSpec& scenario);

}  // namespace acsim

#endif  // ACSIM_CONTENT_SIM_H_
