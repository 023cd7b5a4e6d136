// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/pipeline.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "acsim/errors.h"
#include "acsim/random.h"
#include "acsim/serialization.h"
#include "acsim/signal_ops.h"
#include "acsim/wav_io.h"

namespace acsim {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::size_t WorkerCount(std::size_t requested, std::size_t tasks) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, tasks));
}

// Runs fn(i) for i in [0, count) on a bounded pool. Exceptions are captured
// per index; the one with the lowest index is rethrown after all workers
// finish.
void ParallelFor(std::size_t count, std::size_t jobs,
                 const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t workers = WorkerCount(jobs, count);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string ReadLine(std::istream& in, std::size_t& line_no, bool& ok) {
  std::string line;
  ok = static_cast<bool>(std::getline(in, line));
  ++line_no;
  return line;
}

json ParseLine(const std::string& line, const std::string& where) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("{}: invalid JSON: {}", where, e.what()));
  }
}

struct AssetRecord {
  std::size_t line = 0;
  std::string kind;
  std::string id;
  std::string uri;
  std::string speaker;
  std::string label;
};

AssetRecord ParseAssetRecord(const json& j, const std::string& where) {
  if (!j.is_object()) throw DataError(fmt::format("{}: expected an object", where));
  AssetRecord r;
  const auto str = [&](const char* key, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) throw DataError(fmt::format("{}: missing field '{}'", where, key));
      return {};
    }
    if (!it->is_string()) {
      throw DataError(fmt::format("{}: field '{}' must be a string", where, key));
    }
    return it->get<std::string>();
  };
  const std::string schema = str("schema", true);
  if (schema != kAssetSchema) {
    throw DataError(fmt::format("{}: schema must be '{}', got '{}'", where,
                                kAssetSchema, schema));
  }
  r.kind = str("kind", true);
  r.id = str("id", true);
  r.uri = str("uri", true);
  const std::string ctx = fmt::format("{} (asset '{}')", where, r.id);
  if (r.id.empty()) throw DataError(fmt::format("{}: empty id", where));
  std::vector<std::string> allowed = {"schema", "kind", "id", "uri"};
  if (r.kind == "speech") {
    r.speaker = str("speaker", true);
    allowed.push_back("speaker");
  } else if (r.kind == "event") {
    r.label = str("label", false);
    allowed.push_back("label");
  } else if (r.kind != "static" && r.kind != "rir") {
    throw DataError(fmt::format("{}: unknown kind '{}'", ctx, r.kind));
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw DataError(fmt::format("{}: unknown field '{}'", ctx, key));
    }
  }
  return r;
}

AudioClip LoadAudio(const fs::path& path, int sample_rate_hz) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext != ".wav") {
    throw DataError(fmt::format("unsupported audio format '{}' (WAV only)", ext));
  }
  AudioClip clip = ReadWavMono(path);
  if (clip.sample_rate() != sample_rate_hz) clip = ResampleToRate(clip, sample_rate_hz);
  return clip;
}

const char* kStemSuffixes[] = {".mixture.wav", ".target1.wav", ".target2.wav"};

ExampleFiles FilesFor(std::size_t index) {
  const std::string stem = ExampleStem(index);
  return ExampleFiles{stem + kStemSuffixes[0], stem + kStemSuffixes[1],
                      stem + kStemSuffixes[2]};
}

json FilesJson(const ExampleFiles& f) {
  return json{{"mixture", f.mixture}, {"target1", f.target1}, {"target2", f.target2}};
}

std::string Compact(const json& j) { return j.dump(); }

AudioClip ReadMonoChecked(const fs::path& path) {
  std::vector<AudioClip> ch = ReadWav(path);
  if (ch.size() != 1) {
    throw DataError(fmt::format("'{}': expected mono audio, got {} channels",
                                path.string(), ch.size()));
  }
  return std::move(ch.front());
}

std::vector<AudioClip> ReadEstimates(const fs::path& dir, const std::string& stem) {
  const fs::path pair1 = dir / (stem + ".est1.wav");
  const fs::path pair2 = dir / (stem + ".est2.wav");
  const fs::path stereo = dir / (stem + ".est.wav");
  if (fs::exists(pair1) || fs::exists(pair2)) {
    if (!fs::exists(pair1) || !fs::exists(pair2)) {
      throw DataError(fmt::format("incomplete estimate pair for {}", stem));
    }
    return {ReadMonoChecked(pair1), ReadMonoChecked(pair2)};
  }
  if (fs::exists(stereo)) {
    std::vector<AudioClip> ch = ReadWav(stereo);
    if (ch.size() != 2) {
      throw DataError(fmt::format("'{}': expected 2 channels, got {}", stereo.string(),
                                  ch.size()));
    }
    return ch;
  }
  throw DataError(fmt::format("missing estimate for {}", stem));
}

EvalRow ScoreExample(const Dataset& dataset, const DatasetRecord& record,
                     const fs::path& estimates_dir, const EvalOptions& options) {
  EvalRow row;
  row.id = record.id;
  row.index = record.index;
  row.scenario = dataset.scenario_tag;
  try {
    const AudioClip mixture = ReadMonoChecked(dataset.directory / record.files.mixture);
    const std::vector<AudioClip> refs = {
        ReadMonoChecked(dataset.directory / record.files.target1),
        ReadMonoChecked(dataset.directory / record.files.target2)};
    const std::vector<AudioClip> ests = ReadEstimates(estimates_dir, ExampleStem(record.index));
    for (std::size_t c = 0; c < 2; ++c) {
      if (ests[c].size() != mixture.size()) {
        throw DataError(fmt::format("estimate channel {} has {} samples, expected {}",
                                    c + 1, ests[c].size(), mixture.size()));
      }
      if (ests[c].sample_rate() != mixture.sample_rate()) {
        throw DataError(fmt::format("estimate channel {} is at {} Hz, expected {} Hz",
                                    c + 1, ests[c].sample_rate(), mixture.sample_rate()));
      }
    }
    const double cap = options.objective.sdr_cap_db;
    const ScenarioSpec spec = ScenarioSpec::FromTag(dataset.scenario_tag);
    if (spec.speakers == 2) {
      const TwoSpeakerScores s = EvaluateTwoSpeaker(refs, ests, mixture, cap);
      row.permutation = s.permutation;
      row.si_sdr = {s.si_sdr[0], s.si_sdr[1]};
      row.si_sdri = {s.si_sdri[0], s.si_sdri[1]};
      row.mean_si_sdri = s.mean_si_sdri;
    } else {
      const SingleSpeakerScores s = EvaluateSingleSpeaker(refs[0], ests, mixture, cap);
      row.permutation = s.permutation;
      row.si_sdr = {s.si_sdr};
      row.si_sdri = {s.si_sdri};
      row.silence_sdr = s.silence_sdr;
      row.silence_sdri = s.silence_sdri;
      row.mean_si_sdri = s.si_sdri;
    }
    const PitLoss loss = PitCombinedLoss(refs, ests, options.weights, options.objective);
    for (const LossBreakdown& b : loss.per_channel) {
      row.loss.l_mstft += b.l_mstft / 2.0;
      row.loss.l_mel += b.l_mel / 2.0;
      row.loss.l_time += b.l_time / 2.0;
      row.loss.l_sdr += b.l_sdr / 2.0;
    }
    row.loss.total = loss.score.aggregate;
  } catch (const std::exception& e) {
    EvalRow failed;
    failed.id = row.id;
    failed.index = row.index;
    failed.scenario = row.scenario;
    failed.error = e.what();
    return failed;
  }
  return row;
}

std::string FormatPlan(const AcousticPlan& p) {
  std::vector<std::string> parts;
  if (p.speed_ratio) parts.push_back(fmt::format("speed x{:.4f}", *p.speed_ratio));
  if (p.volume_anchors) {
    std::vector<std::string> a;
    for (const VolumeAnchor& v : *p.volume_anchors) {
      a.push_back(fmt::format("{:.3f}:{:+.2f}dB", v.position, v.gain_db));
    }
    parts.push_back(fmt::format("volume [{}]", fmt::join(a, ", ")));
  }
  if (p.pre_reverb_eq) {
    parts.push_back(fmt::format("pre-eq [{:+.2f}]", fmt::join(*p.pre_reverb_eq, ", ")));
  }
  if (p.reverb) {
    parts.push_back(fmt::format("reverb {} (drr x{:.3f}, rt60 x{:.3f})", p.reverb->rir_id,
                                p.reverb->params.drr_scale, p.reverb->params.rt60_scale));
  }
  if (p.post_eq) {
    parts.push_back(fmt::format("post-eq [{:+.2f}]", fmt::join(*p.post_eq, ", ")));
  }
  if (parts.empty()) return "identity";
  return fmt::format("{}", fmt::join(parts, "; "));
}

void AppendTrack(std::string& out, const char* name, const TrackRecipe& t,
                 const char* level_unit, double gain, double plan_norm) {
  out += fmt::format("  {}: {}\n", name, t.asset_id);
  out += fmt::format("    source_offset={} placement_offset={}\n", t.source_offset,
                     t.placement_offset);
  out += fmt::format("    level {:.3f} {} -> gain {:.6g} (plan normalization {:.6g})\n",
                     t.level_db, level_unit, gain, plan_norm);
  out += fmt::format("    plan: {}\n", FormatPlan(t.plan));
  if (!t.splice.empty()) {
    std::vector<std::string> segs;
    for (const SpliceSegment& s : t.splice) {
      segs.push_back(fmt::format("{}->{}+{}", s.src_start, s.dst_start, s.length));
    }
    out += fmt::format("    splice: {}\n", fmt::join(segs, " "));
  }
}

bool MatchesFloat32(const AudioClip& stored, const AudioClip& replayed) {
  if (stored.size() != replayed.size()) return false;
  for (std::size_t i = 0; i < stored.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(static_cast<float>(stored[i])) !=
        std::bit_cast<std::uint32_t>(static_cast<float>(replayed[i]))) {
      return false;
    }
  }
  return true;
}

double Mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

}  // namespace

AssetCatalog LoadCatalog(const fs::path& manifest, int sample_rate_hz) {
  std::ifstream in(manifest);
  if (!in) throw DataError(fmt::format("cannot open manifest '{}'", manifest.string()));
  const fs::path base = manifest.parent_path();

  std::vector<AssetRecord> records;
  std::size_t line_no = 0;
  bool ok = true;
  for (std::string line = ReadLine(in, line_no, ok); ok;
       line = ReadLine(in, line_no, ok)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = fmt::format("{}:{}", manifest.string(), line_no);
    AssetRecord r = ParseAssetRecord(ParseLine(line, where), where);
    r.line = line_no;
    records.push_back(std::move(r));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const AssetRecord& a, const AssetRecord& b) { return a.id < b.id; });

  AssetCatalog catalog;
  for (const AssetRecord& r : records) {
    const std::string where =
        fmt::format("{}:{} (asset '{}')", manifest.string(), r.line, r.id);
    try {
      if (catalog.Contains(r.id)) {
        throw CatalogError(fmt::format("duplicate asset id '{}'", r.id));
      }
      const fs::path uri(r.uri);
      const fs::path path = uri.is_absolute() ? uri : base / uri;
      if (!fs::exists(path)) {
        throw DataError(fmt::format("missing audio file '{}'", path.string()));
      }
      AudioClip clip = LoadAudio(path, sample_rate_hz);
      if (r.kind == "speech") {
        catalog.AddSpeech(SpeechAsset{r.id, r.speaker, r.uri, std::move(clip)});
      } else if (r.kind == "static") {
        catalog.AddStaticNoise(StaticNoiseAsset{r.id, r.uri, std::move(clip)});
      } else if (r.kind == "event") {
        catalog.AddEventNoise(EventNoiseAsset{r.id, r.label, r.uri, std::move(clip)});
      } else {
        catalog.AddRir(RirAsset{r.id, r.uri, RoomImpulseResponse::FromClip(std::move(clip))});
      }
    } catch (const std::exception& e) {
      throw DataError(fmt::format("{}: {}", where, e.what()));
    }
  }
  return catalog;
}

SimulationConfig LoadConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  try {
    SimulationConfig cfg = SimulationConfigFromJson(j);
    cfg.Validate();
    return cfg;
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void GenerationJob::Validate() const {
  if (count < 1) throw ConfigError("count must be at least 1");
  if (output_dir.empty()) throw ConfigError("output directory is required");
  scenario.Validate();
  cfg.Validate();
}

std::string ExampleStem(std::size_t index) { return fmt::format("ex{:06}", index); }

std::string ExampleId(const std::string& scenario_tag, std::size_t index) {
  return scenario_tag + "/" + ExampleStem(index);
}

fs::path GenerateSet(const GenerationJob& job, const AssetCatalog& catalog) {
  job.Validate();
  CheckScenarioSupported(catalog, job.scenario);
  const std::string tag = job.scenario.Tag();
  const fs::path dir = job.output_dir / tag;
  fs::create_directories(dir);

  std::vector<std::string> records(job.count);
  ParallelFor(job.count, job.jobs, [&](std::size_t i) {
    const std::uint64_t seed = DeriveExampleSeed(job.master_seed, tag, i);
    const MixtureExample ex = AssembleExample(seed, catalog, job.cfg, job.scenario);
    const ExampleFiles files = FilesFor(i);
    WriteWavFloat(dir / files.mixture, ex.mixture);
    WriteWavFloat(dir / files.target1, ex.targets[0]);
    WriteWavFloat(dir / files.target2, ex.targets[1]);
    records[i] = Compact(json{{"schema", kExampleSchema},
                              {"id", ExampleId(tag, i)},
                              {"index", i},
                              {"files", FilesJson(files)},
                              {"metadata", ToJson(ex.metadata)}});
  });

  // Records are collected per index and written once, in index order.
  const fs::path manifest = dir / kDatasetManifestName;
  std::ofstream out(manifest, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", manifest.string()));
  out << Compact(json{{"schema", kDatasetSchema},
                      {"scenario", tag},
                      {"master_seed", job.master_seed},
                      {"count", job.count},
                      {"config", ToJson(job.cfg)}})
      << '\n';
  for (const std::string& r : records) out << r << '\n';
  if (!out) throw DataError(fmt::format("failed writing '{}'", manifest.string()));
  return manifest;
}

Dataset ReadDataset(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw DataError(fmt::format("cannot open dataset manifest '{}'", manifest.string()));
  Dataset ds;
  ds.directory = manifest.parent_path();
  std::size_t line_no = 0;
  bool ok = true;
  std::string line = ReadLine(in, line_no, ok);
  if (!ok) throw DataError(fmt::format("{}: empty dataset manifest", manifest.string()));
  {
    const std::string where = fmt::format("{}:{}", manifest.string(), line_no);
    const json header = ParseLine(line, where);
    try {
      if (!header.is_object() || header.value("schema", "") != kDatasetSchema) {
        throw DataError(fmt::format("schema must be '{}'", kDatasetSchema));
      }
      for (const auto& [key, value] : header.items()) {
        if (key != "schema" && key != "scenario" && key != "master_seed" &&
            key != "count" && key != "config") {
          throw DataError(fmt::format("header.{}: unknown field", key));
        }
      }
      ds.scenario_tag = header.at("scenario").get<std::string>();
      ScenarioSpec::FromTag(ds.scenario_tag);
      ds.master_seed = header.at("master_seed").get<std::uint64_t>();
      ds.count = header.at("count").get<std::size_t>();
      ds.cfg = SimulationConfigFromJson(header.at("config"));
    } catch (const json::exception& e) {
      throw DataError(fmt::format("{}: {}", where, e.what()));
    } catch (const std::exception& e) {
      throw DataError(fmt::format("{}: {}", where, e.what()));
    }
  }
  for (line = ReadLine(in, line_no, ok); ok; line = ReadLine(in, line_no, ok)) {
    if (line.empty()) continue;
    const std::string where = fmt::format("{}:{}", manifest.string(), line_no);
    const json j = ParseLine(line, where);
    try {
      if (!j.is_object()) throw DataError("expected an object");
      for (const auto& [key, value] : j.items()) {
        if (key != "schema" && key != "id" && key != "index" && key != "files" &&
            key != "metadata") {
          throw DataError(fmt::format("example.{}: unknown field", key));
        }
      }
      if (j.value("schema", "") != kExampleSchema) {
        throw DataError(fmt::format("example.schema: must be '{}'", kExampleSchema));
      }
      DatasetRecord r;
      r.id = j.at("id").get<std::string>();
      r.index = j.at("index").get<std::size_t>();
      const json& f = j.at("files");
      r.files = ExampleFiles{f.at("mixture").get<std::string>(),
                             f.at("target1").get<std::string>(),
                             f.at("target2").get<std::string>()};
      r.metadata = ExampleMetadataFromJson(j.at("metadata"), "metadata");
      ds.examples.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError(fmt::format("{}: {}", where, e.what()));
    } catch (const std::exception& e) {
      throw DataError(fmt::format("{}: {}", where, e.what()));
    }
  }
  if (ds.examples.size() != ds.count) {
    throw DataError(fmt::format("{}: header lists {} examples, found {}",
                                manifest.string(), ds.count, ds.examples.size()));
  }
  return ds;
}

const DatasetRecord& FindExample(const Dataset& dataset, const std::string& id) {
  for (const DatasetRecord& r : dataset.examples) {
    if (r.id == id || ExampleStem(r.index) == id || std::to_string(r.index) == id) {
      return r;
    }
  }
  throw ConfigError(fmt::format("unknown example '{}' in {}", id, dataset.scenario_tag));
}

std::string DescribeExample(const Dataset& dataset, const DatasetRecord& record) {
  const ExampleRecipe& rc = record.metadata.recipe;
  const RenderInfo& ri = record.metadata.render;
  std::string out;
  out += fmt::format("example {} (index {})\n", record.id, record.index);
  out += fmt::format("  scenario: {}\n", rc.scenario_tag);
  out += fmt::format("  master_seed: {}\n", dataset.master_seed);
  out += fmt::format("  example_seed: {:#018x}\n", rc.seed);
  out += fmt::format("  files: {} {} {}\n", record.files.mixture, record.files.target1,
                     record.files.target2);
  AppendTrack(out, "speaker1", rc.speaker1, "dBFS", ri.speaker1_gain,
              ri.speaker1_plan_normalization);
  if (rc.speaker2) {
    AppendTrack(out, "speaker2", *rc.speaker2, "dB rel. speaker1", ri.speaker2_gain,
                ri.speaker2_plan_normalization);
  }
  if (rc.static_noise) {
    AppendTrack(out, "static", *rc.static_noise, "dB SNR", ri.static_gain,
                ri.static_plan_normalization);
  }
  if (rc.event) {
    AppendTrack(out, "event", *rc.event, "dB SNR", ri.event_gain,
                ri.event_plan_normalization);
    out += fmt::format("    overlap_removal: {}\n", rc.overlap_removal);
  }
  out += fmt::format("  final_normalization: {:.6g}\n", ri.final_normalization);
  out += "metadata: " + Compact(ToJson(record.metadata)) + "\n";
  return out;
}

MixtureExample ReplayExample(const Dataset& dataset, const DatasetRecord& record,
                             const AssetCatalog& catalog) {
  return RenderExample(record.metadata.recipe, catalog, dataset.cfg);
}

ReplayCheck VerifyReplay(const Dataset& dataset, const DatasetRecord& record,
                         const AssetCatalog& catalog) {
  const MixtureExample ex = ReplayExample(dataset, record, catalog);
  ReplayCheck check;
  check.mixture_match =
      MatchesFloat32(ReadMonoChecked(dataset.directory / record.files.mixture), ex.mixture);
  check.target1_match = MatchesFloat32(
      ReadMonoChecked(dataset.directory / record.files.target1), ex.targets[0]);
  check.target2_match = MatchesFloat32(
      ReadMonoChecked(dataset.directory / record.files.target2), ex.targets[1]);
  return check;
}

bool EvalReport::has_errors() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const EvalRow& r) { return r.error.has_value(); });
}

std::vector<EvalRow> EvaluateSet(const Dataset& dataset, const fs::path& estimates_dir,
                                 const EvalOptions& options) {
  std::vector<EvalRow> rows(dataset.examples.size());
  ParallelFor(rows.size(), options.jobs, [&](std::size_t i) {
    rows[i] = ScoreExample(dataset, dataset.examples[i], estimates_dir, options);
  });
  std::sort(rows.begin(), rows.end(),
            [](const EvalRow& a, const EvalRow& b) { return a.index < b.index; });
  return rows;
}

std::vector<ScenarioSummary> Summarize(const std::vector<EvalRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const EvalRow*>> groups;
  for (const EvalRow& r : rows) {
    if (!groups.count(r.scenario)) order.push_back(r.scenario);
    groups[r.scenario].push_back(&r);
  }
  std::vector<ScenarioSummary> out;
  for (const std::string& tag : order) {
    ScenarioSummary s;
    s.scenario = tag;
    std::vector<double> sdri, silence, loss;
    for (const EvalRow* r : groups[tag]) {
      if (r->error) {
        ++s.num_errors;
        continue;
      }
      ++s.num_examples;
      sdri.push_back(r->mean_si_sdri);
      loss.push_back(r->loss.total);
      if (r->silence_sdri) silence.push_back(*r->silence_sdri);
    }
    s.mean_si_sdri = Mean(sdri);
    s.mean_loss = Mean(loss);
    if (!silence.empty()) s.mean_silence_sdri = Mean(silence);
    out.push_back(std::move(s));
  }
  return out;
}

json ToJson(const EvalRow& r) {
  json j{{"schema", kReportRowSchema}, {"id", r.id}, {"index", r.index},
         {"scenario", r.scenario}};
  if (r.error) {
    j["error"] = *r.error;
    return j;
  }
  j["permutation"] = r.permutation;
  j["si_sdr"] = r.si_sdr;
  j["si_sdri"] = r.si_sdri;
  j["mean_si_sdri"] = r.mean_si_sdri;
  if (r.silence_sdr) j["silence_sdr"] = *r.silence_sdr;
  if (r.silence_sdri) j["silence_sdri"] = *r.silence_sdri;
  j["loss"] = json{{"mstft", r.loss.l_mstft}, {"mel", r.loss.l_mel},
                   {"time", r.loss.l_time},   {"sdr", r.loss.l_sdr},
                   {"total", r.loss.total}};
  return j;
}

json ToJson(const ScenarioSummary& s) {
  json j{{"schema", kReportSummarySchema}, {"scenario", s.scenario},
         {"num_examples", s.num_examples}, {"num_errors", s.num_errors},
         {"mean_si_sdri", s.mean_si_sdri}, {"mean_loss", s.mean_loss}};
  if (s.mean_silence_sdri) j["mean_silence_sdri"] = *s.mean_silence_sdri;
  return j;
}

void WriteReport(const fs::path& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write report '{}'", path.string()));
  for (const EvalRow& r : report.rows) out << Compact(ToJson(r)) << '\n';
  for (const ScenarioSummary& s : report.summaries) out << Compact(ToJson(s)) << '\n';
  if (!out) throw DataError(fmt::format("failed writing '{}'", path.string()));
}

std::string FormatReportTable(const EvalReport& report) {
  std::string out = fmt::format("{:<8} {:>6} {:>6} {:>10} {:>14} {:>12}\n", "scenario",
                                "n", "errors", "SI-SDRi", "Silence-SDRi", "loss");
  for (const ScenarioSummary& s : report.summaries) {
    const std::string silence =
        s.mean_silence_sdri ? fmt::format("{:.2f}", *s.mean_silence_sdri) : "-";
    out += fmt::format("{:<8} {:>6} {:>6} {:>10.2f} {:>14} {:>12.3f}\n", s.scenario,
                       s.num_examples, s.num_errors, s.mean_si_sdri, silence, s.mean_loss);
  }
  return out;
}

}  // namespace acsim
