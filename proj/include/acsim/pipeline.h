// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_PIPELINE_H_
#define ACSIM_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acsim/catalog.h"
#include "acsim/config.h"
#include "acsim/content_sim.h"
#include "acsim/objectives.h"
#include "acsim/scenario.h"

namespace acsim {

// Loads an asset manifest: one JSON record per line,
//
//   {"schema": "acsim.asset/1", "kind": "speech", "id": "spk1_utt1",
//    "uri": "speech/spk1_utt1.wav", "speaker": "spk1"}
//
// kind is one of speech | static | event | rir; speech requires "speaker",
// event takes an optional "label". Relative URIs resolve against the
// manifest's directory. Audio is downmixed to mono and resampled to
// `sample_rate_hz`. Entries are added in id order, so the result does not
// depend on line order. Errors name the manifest line and asset id.
AssetCatalog LoadCatalog(const std::filesystem::path& manifest,
                         int sample_rate_hz = kDefaultSampleRate);

// Reads a config file (a single JSON object). Missing fields keep defaults.
SimulationConfig LoadConfig(const std::filesystem::path& path);

struct GenerationJob {
  std::uint64_t master_seed = 0;
  ScenarioSpec scenario;
  std::size_t count = 60;
  SimulationConfig cfg;
  // Examples go to output_dir / <scenario tag>.
  std::filesystem::path output_dir;
  // Worker threads; 0 picks the hardware concurrency.
  std::size_t jobs = 0;

  void Validate() const;
};

// "ex000042"
std::string ExampleStem(std::size_t index);
// "D-All/ex000042"
std::string ExampleId(const std::string& scenario_tag, std::size_t index);

struct ExampleFiles {
  std::string mixture;
  std::string target1;
  std::string target2;

  friend bool operator==(const ExampleFiles&, const ExampleFiles&) = default;
};

struct DatasetRecord {
  std::string id;
  std::size_t index = 0;
  ExampleFiles files;
  ExampleMetadata metadata;
};

// A generated set as described by its dataset.jsonl.
struct Dataset {
  std::filesystem::path directory;
  std::string scenario_tag;
  std::uint64_t master_seed = 0;
  std::size_t count = 0;
  SimulationConfig cfg;
  std::vector<DatasetRecord> examples;
};

inline constexpr const char* kDatasetManifestName = "dataset.jsonl";

// Writes count examples and <dir>/dataset.jsonl. Output bytes depend only
// on (catalog, job) and not on the number of workers. Returns the manifest
// path.
std::filesystem::path GenerateSet(const GenerationJob& job, const AssetCatalog& catalog);

// Throws DataError naming the line and field on malformed records.
Dataset ReadDataset(const std::filesystem::path& manifest);

// Accepts "D-All/ex000003", "ex000003", or a bare index. Throws ConfigError
// when no example matches.
const DatasetRecord& FindExample(const Dataset& dataset, const std::string& id);

// Multi-line human-readable trace of one example. The last line is
// "metadata: " followed by the metadata record as compact JSON.
std::string DescribeExample(const Dataset& dataset, const DatasetRecord& record);

// Renders the example again from its recorded recipe.
MixtureExample ReplayExample(const Dataset& dataset, const DatasetRecord& record,
                             const AssetCatalog& catalog);

struct ReplayCheck {
  bool mixture_match = false;
  bool target1_match = false;
  bool target2_match = false;
  bool all() const { return mixture_match && target1_match && target2_match; }
};

// Compares a replay with the stored float32 WAV files sample by sample.
ReplayCheck VerifyReplay(const Dataset& dataset, const DatasetRecord& record,
                         const AssetCatalog& catalog);

struct EvalRow {
  std::string id;
  std::size_t index = 0;
  std::string scenario;
  // Set when the example could not be scored; metric fields are then unset.
  std::optional<std::string> error;

  // permutation[r] is the estimate channel assigned to reference r.
  std::vector<std::size_t> permutation;
  // Two entries for two-speaker examples; one (speaker channel) otherwise.
  std::vector<double> si_sdr;
  std::vector<double> si_sdri;
  // Single-speaker examples only.
  std::optional<double> silence_sdr;
  std::optional<double> silence_sdri;
  // Mean SI-SDRi over the speaker channels.
  double mean_si_sdri = 0.0;
  // Combined loss of the loss-minimizing assignment, averaged over channels.
  LossBreakdown loss;
};

struct ScenarioSummary {
  std::string scenario;
  std::size_t num_examples = 0;
  std::size_t num_errors = 0;
  double mean_si_sdri = 0.0;
  // Single-speaker scenarios only.
  std::optional<double> mean_silence_sdri;
  double mean_loss = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<ScenarioSummary> summaries;

  bool has_errors() const;
};

struct EvalOptions {
  LossWeights weights;
  ObjectiveConfig objective;
  std::size_t jobs = 0;
};

// Scores estimates for every example of a dataset. For example stem
// ex000003 the estimates are ex000003.est1.wav and ex000003.est2.wav, or a
// two-channel ex000003.est.wav, under estimates_dir. Missing or mismatched
// estimates produce error rows.
std::vector<EvalRow> EvaluateSet(const Dataset& dataset,
                                 const std::filesystem::path& estimates_dir,
                                 const EvalOptions& options = {});

// Per-scenario arithmetic means over rows without errors, in order of first
// appearance.
std::vector<ScenarioSummary> Summarize(const std::vector<EvalRow>& rows);

nlohmann::json ToJson(const EvalRow& row);
nlohmann::json ToJson(const ScenarioSummary& summary);
// Writes rows then summaries, one JSON record per line.
void WriteReport(const std::filesystem::path& path, const EvalReport& report);
std::string FormatReportTable(const EvalReport& report);

}  // namespace acsim

#endif  // ACSIM_PIPELINE_H_
