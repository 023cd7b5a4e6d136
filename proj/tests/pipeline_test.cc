// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "acsim/errors.h"
#include "acsim/pipeline.h"
#include "acsim/serialization.h"
#include "acsim/wav_io.h"
#include "oracles.h"
#include "test_util.h"

namespace acsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> Lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

void WriteLines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p);
  for (const auto& l : lines) out << l << '\n';
}

std::string CatalogError(const fs::path& manifest) {
  try {
    LoadCatalog(manifest);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    assets_ = new fs::path(testing::TempDir("pipeline_assets"));
    manifest_ = new fs::path(testing::WriteSyntheticManifest(*assets_));
    catalog_ = new AssetCatalog(LoadCatalog(*manifest_));
  }

  static fs::path* assets_;
  static fs::path* manifest_;
  static AssetCatalog* catalog_;
};

fs::path* PipelineTest::assets_ = nullptr;
fs::path* PipelineTest::manifest_ = nullptr;
AssetCatalog* PipelineTest::catalog_ = nullptr;

TEST_F(PipelineTest, LoadCatalogCounts) {
  EXPECT_EQ(catalog_->speech().size(), 8u);
  EXPECT_EQ(catalog_->static_noise().size(), 2u);
  EXPECT_EQ(catalog_->event_noise().size(), 2u);
  EXPECT_EQ(catalog_->rirs().size(), 2u);
  EXPECT_EQ(catalog_->FindEventNoise("event0").label, "cough");
  EXPECT_EQ(catalog_->FindSpeech("spk2_utt1").speaker_id, "spk2");
}

TEST_F(PipelineTest, LoadIsOrderIndependent) {
  std::vector<std::string> lines = Lines(*manifest_);
  std::reverse(lines.begin(), lines.end());
  std::mt19937 gen(3);
  std::shuffle(lines.begin(), lines.end(), gen);
  const fs::path shuffled = *assets_ / "shuffled.jsonl";
  WriteLines(shuffled, lines);
  const AssetCatalog other = LoadCatalog(shuffled);
  ASSERT_EQ(other.speech().size(), catalog_->speech().size());
  for (std::size_t i = 0; i < other.speech().size(); ++i) {
    EXPECT_EQ(other.speech()[i].id, catalog_->speech()[i].id);
    EXPECT_EQ(other.speech()[i].clip, catalog_->speech()[i].clip);
  }
  EXPECT_EQ(other.RirIds(), catalog_->RirIds());
}

TEST_F(PipelineTest, ManifestErrorsNameTheEntry) {
  std::vector<std::string> lines = Lines(*manifest_);
  const fs::path bad = *assets_ / "bad.jsonl";

  WriteLines(bad, {lines[0], lines[0]});
  EXPECT_NE(CatalogError(bad).find("duplicate asset id 'spk0_utt0'"), std::string::npos);

  WriteLines(bad, {R"({"schema":"acsim.asset/1","kind":"static","id":"ghost","uri":"nope.wav"})"});
  const std::string missing = CatalogError(bad);
  EXPECT_NE(missing.find("'ghost'"), std::string::npos) << missing;
  EXPECT_NE(missing.find("missing audio file"), std::string::npos) << missing;

  WriteLines(bad, {R"({"schema":"acsim.asset/1","kind":"static","id":"s","uri":"x.wav","gain":2})"});
  EXPECT_NE(CatalogError(bad).find("unknown field 'gain'"), std::string::npos);

  WriteLines(bad, {R"({"schema":"acsim.asset/1","kind":"speech","id":"s","uri":"x.wav"})"});
  EXPECT_NE(CatalogError(bad).find("missing field 'speaker'"), std::string::npos);

  WriteLines(bad, {R"({"schema":"acsim.asset/1","kind":"static","id":"f","uri":"x.flac"})"});
  std::ofstream(*assets_ / "x.flac") << "fLaC";
  EXPECT_NE(CatalogError(bad).find("unsupported audio format"), std::string::npos);

  WriteLines(bad, {"{not json"});
  EXPECT_NE(CatalogError(bad).find("bad.jsonl:1"), std::string::npos);
}

TEST_F(PipelineTest, ResamplesOnLoad) {
  const fs::path dir = testing::TempDir("pipeline_44k");
  const AudioClip src = testing::SpeechLike(5, 150.0, 2.0, 44100);
  WriteWavPcm16(dir / "a.wav", src);
  WriteLines(dir / "m.jsonl",
             {R"({"schema":"acsim.asset/1","kind":"speech","id":"a","uri":"a.wav","speaker":"x"})"});
  const AssetCatalog c = LoadCatalog(dir / "m.jsonl");
  const AudioClip& clip = c.FindSpeech("a").clip;
  EXPECT_EQ(clip.sample_rate(), 16000);
  EXPECT_LE(std::abs(clip.duration_s() - src.duration_s()), 1.0 / 16000.0);
}

TEST_F(PipelineTest, GenerationIsByteIdenticalAcrossRunsAndWorkers) {
  GenerationJob job;
  job.master_seed = 7;
  job.scenario = ScenarioSpec::FromTag("S-N");
  job.count = 4;
  job.output_dir = testing::TempDir("pipeline_gen_a");
  job.jobs = 1;
  const fs::path m1 = GenerateSet(job, *catalog_);
  job.output_dir = testing::TempDir("pipeline_gen_b");
  job.jobs = 3;
  const fs::path m2 = GenerateSet(job, *catalog_);
  EXPECT_EQ(Slurp(m1), Slurp(m2));
  for (std::size_t i = 0; i < 4; ++i) {
    for (const char* kind : {"mixture", "target1", "target2"}) {
      const std::string name = ExampleStem(i) + "." + kind + ".wav";
      EXPECT_EQ(Slurp(m1.parent_path() / name), Slurp(m2.parent_path() / name)) << name;
    }
  }
  EXPECT_EQ(m1.parent_path().filename(), "S-N");
}

TEST_F(PipelineTest, NoReverbPlanInDne) {
  GenerationJob job;
  job.master_seed = 11;
  job.scenario = ScenarioSpec::FromTag("D-NE");
  job.count = 6;
  job.output_dir = testing::TempDir("pipeline_dne");
  const Dataset ds = ReadDataset(GenerateSet(job, *catalog_));
  ASSERT_EQ(ds.examples.size(), 6u);
  for (const DatasetRecord& r : ds.examples) {
    EXPECT_FALSE(r.metadata.recipe.speaker1.plan.reverb);
    ASSERT_TRUE(r.metadata.recipe.speaker2);
    EXPECT_FALSE(r.metadata.recipe.speaker2->plan.reverb);
    EXPECT_TRUE(r.metadata.recipe.event);
  }
}

TEST_F(PipelineTest, DescribeRoundTripsAndReplaysBitExactly) {
  GenerationJob job;
  job.master_seed = 21;
  job.scenario = ScenarioSpec::FromTag("D-All");
  job.count = 3;
  job.output_dir = testing::TempDir("pipeline_describe");
  const Dataset ds = ReadDataset(GenerateSet(job, *catalog_));
  EXPECT_EQ(ds.master_seed, 21u);
  EXPECT_EQ(ds.cfg, SimulationConfig{});
  for (const DatasetRecord& r : ds.examples) {
    EXPECT_EQ(&FindExample(ds, r.id), &r);
    EXPECT_EQ(&FindExample(ds, ExampleStem(r.index)), &r);
    const std::string trace = DescribeExample(ds, r);
    EXPECT_NE(trace.find("scenario: D-All"), std::string::npos);
    const std::size_t pos = trace.rfind("metadata: ");
    ASSERT_NE(pos, std::string::npos);
    const json j = json::parse(trace.substr(pos + 10));
    EXPECT_EQ(ExampleMetadataFromJson(j), r.metadata);
    EXPECT_EQ(r.metadata.recipe.seed, DeriveExampleSeed(21, "D-All", r.index));
    EXPECT_TRUE(VerifyReplay(ds, r, *catalog_).all());
  }
  EXPECT_THROW(FindExample(ds, "ex999999"), ConfigError);
}

TEST_F(PipelineTest, CorruptedDatasetRecordNamesField) {
  GenerationJob job;
  job.master_seed = 3;
  job.scenario = ScenarioSpec::FromTag("S-NE");
  job.count = 2;
  job.output_dir = testing::TempDir("pipeline_corrupt");
  const fs::path manifest = GenerateSet(job, *catalog_);
  std::vector<std::string> lines = Lines(manifest);
  json rec = json::parse(lines[2]);
  rec["metadata"]["recipe"]["speaker1"]["plan"]["speed_ratio"] = "fast";
  lines[2] = rec.dump();
  WriteLines(manifest, lines);
  try {
    ReadDataset(manifest);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find(":3:"), std::string::npos) << what;
    EXPECT_NE(what.find("metadata.recipe.speaker1.plan.speed_ratio"), std::string::npos)
        << what;
  }
}

// Scores recomputed from the WAV files with the direct-formula oracles.
struct ScriptedScore {
  std::vector<double> si_sdri;
  double silence_sdri = 0.0;
};

double Capped(double v) { return std::min(60.0, v); }

ScriptedScore ScriptScore(bool two_speaker, const std::vector<std::vector<double>>& refs,
                          const std::vector<std::vector<double>>& ests,
                          const std::vector<double>& mix) {
  ScriptedScore out;
  if (two_speaker) {
    const double straight =
        Capped(testing::OracleSiSdr(refs[0], ests[0])) + Capped(testing::OracleSiSdr(refs[1], ests[1]));
    const double swapped =
        Capped(testing::OracleSiSdr(refs[0], ests[1])) + Capped(testing::OracleSiSdr(refs[1], ests[0]));
    const bool swap = swapped > straight;
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& e = ests[swap ? 1 - c : c];
      out.si_sdri.push_back(Capped(testing::OracleSiSdr(refs[c], e)) -
                            Capped(testing::OracleSiSdr(refs[c], mix)));
    }
  } else {
    const double a = Capped(testing::OracleSiSdr(refs[0], ests[0]));
    const double b = Capped(testing::OracleSiSdr(refs[0], ests[1]));
    const std::size_t speaker = b > a ? 1 : 0;
    out.si_sdri.push_back(std::max(a, b) - Capped(testing::OracleSiSdr(refs[0], mix)));
    out.silence_sdri = Capped(testing::OracleSilenceSdr(refs[0], ests[1 - speaker])) -
                       Capped(testing::OracleSilenceSdr(refs[0], mix));
  }
  return out;
}

std::vector<double> ReadVec(const fs::path& p) {
  const AudioClip c = ReadWavMono(p);
  return {c.samples().begin(), c.samples().end()};
}

TEST_F(PipelineTest, EvaluateMatchesScriptedComputation) {
  const fs::path root = testing::TempDir("pipeline_eval");
  const fs::path est_root = root / "est";
  std::vector<Dataset> sets;
  for (const char* tag : {"D-All", "S-NE"}) {
    GenerationJob job;
    job.master_seed = 5;
    job.scenario = ScenarioSpec::FromTag(tag);
    job.count = tag[0] == 'D' ? 2 : 1;
    job.output_dir = root / "data";
    sets.push_back(ReadDataset(GenerateSet(job, *catalog_)));
  }

  // Hand-constructed estimates: scaled targets with leakage and noise, one
  // example with swapped channels, one as a two-channel file.
  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal(0.0, 0.01);
  std::vector<EvalRow> rows;
  std::vector<ScriptedScore> expected;
  for (const Dataset& ds : sets) {
    const fs::path est_dir = est_root / ds.scenario_tag;
    fs::create_directories(est_dir);
    for (const DatasetRecord& r : ds.examples) {
      const auto t1 = ReadVec(ds.directory / r.files.target1);
      const auto t2 = ReadVec(ds.directory / r.files.target2);
      const auto mix = ReadVec(ds.directory / r.files.mixture);
      std::vector<double> e1(t1.size()), e2(t1.size());
      for (std::size_t i = 0; i < t1.size(); ++i) {
        e1[i] = 0.9 * t1[i] + 0.1 * t2[i] + normal(gen);
        e2[i] = 0.8 * t2[i] + 0.05 * t1[i] + 0.1 * normal(gen);
      }
      const bool swap = r.index == 1;
      std::vector<AudioClip> est = {AudioClip(swap ? e2 : e1, 16000),
                                    AudioClip(swap ? e1 : e2, 16000)};
      const std::string stem = ExampleStem(r.index);
      if (r.index == 0) {
        WriteWavFloat(est_dir / (stem + ".est.wav"), est);
      } else {
        WriteWavFloat(est_dir / (stem + ".est1.wav"), est[0]);
        WriteWavFloat(est_dir / (stem + ".est2.wav"), est[1]);
      }
      // Oracle works from the float32 files as stored.
      std::vector<std::vector<double>> ests;
      for (const AudioClip& c : est) {
        std::vector<double> v;
        for (double s : c.samples()) v.push_back(static_cast<float>(s));
        ests.push_back(v);
      }
      expected.push_back(ScriptScore(ds.scenario_tag[0] == 'D', {t1, t2}, ests, mix));
    }
    const std::vector<EvalRow> got = EvaluateSet(ds, est_dir);
    rows.insert(rows.end(), got.begin(), got.end());
  }

  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ASSERT_FALSE(rows[k].error) << *rows[k].error;
    ASSERT_EQ(rows[k].si_sdri.size(), expected[k].si_sdri.size());
    for (std::size_t c = 0; c < rows[k].si_sdri.size(); ++c) {
      EXPECT_NEAR(rows[k].si_sdri[c], expected[k].si_sdri[c], 1e-9);
    }
    if (rows[k].silence_sdri) {
      EXPECT_NEAR(*rows[k].silence_sdri, expected[k].silence_sdri, 1e-9);
    }
  }
  EXPECT_EQ(rows[1].permutation, (std::vector<std::size_t>{1, 0}));

  // Report arithmetic.
  const std::vector<ScenarioSummary> sum = Summarize(rows);
  ASSERT_EQ(sum.size(), 2u);
  EXPECT_EQ(sum[0].scenario, "D-All");
  EXPECT_NEAR(sum[0].mean_si_sdri, (rows[0].mean_si_sdri + rows[1].mean_si_sdri) / 2.0, 1e-9);
  EXPECT_NEAR(sum[1].mean_si_sdri, rows[2].si_sdri[0], 1e-9);
  ASSERT_TRUE(sum[1].mean_silence_sdri);
  EXPECT_NEAR(*sum[1].mean_silence_sdri, *rows[2].silence_sdri, 1e-9);
  EXPECT_FALSE(sum[0].mean_silence_sdri);

  EvalReport report{rows, sum};
  const fs::path report_path = root / "report.jsonl";
  WriteReport(report_path, report);
  EXPECT_EQ(Lines(report_path).size(), 5u);
  EXPECT_NE(FormatReportTable(report).find("S-NE"), std::string::npos);
}

TEST_F(PipelineTest, EvaluateReportsErrorRowsAndContinues) {
  const fs::path root = testing::TempDir("pipeline_eval_err");
  GenerationJob job;
  job.master_seed = 8;
  job.scenario = ScenarioSpec::FromTag("D-N");
  job.count = 3;
  job.output_dir = root / "data";
  const Dataset ds = ReadDataset(GenerateSet(job, *catalog_));
  const fs::path est = root / "est";
  fs::create_directories(est);
  // ex0: correct; ex1: missing; ex2: short.
  const auto copy_targets = [&](std::size_t i, std::size_t trim) {
    for (int c = 1; c <= 2; ++c) {
      AudioClip t = ReadWavMono(ds.directory / fmt::format("ex{:06}.target{}.wav", i, c));
      std::vector<double> v(t.samples().begin(), t.samples().end() - trim);
      WriteWavFloat(est / fmt::format("ex{:06}.est{}.wav", i, c), AudioClip(v, 16000));
    }
  };
  copy_targets(0, 0);
  copy_targets(2, 10);
  const std::vector<EvalRow> rows = EvaluateSet(ds, est);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].error);
  EXPECT_EQ(rows[0].si_sdr, (std::vector<double>{60.0, 60.0}));
  ASSERT_TRUE(rows[1].error);
  EXPECT_NE(rows[1].error->find("missing estimate"), std::string::npos);
  ASSERT_TRUE(rows[2].error);
  EXPECT_NE(rows[2].error->find("samples"), std::string::npos);
  EvalReport report{rows, Summarize(rows)};
  EXPECT_TRUE(report.has_errors());
  EXPECT_EQ(report.summaries[0].num_errors, 2u);
  EXPECT_EQ(report.summaries[0].num_examples, 1u);
}

TEST(PipelineConfigTest, LoadConfigAndJobValidation) {
  const fs::path dir = testing::TempDir("pipeline_cfg");
  std::ofstream(dir / "ok.json") << R"({"schema":"acsim.config/1","p_seg":0.5})";
  EXPECT_EQ(LoadConfig(dir / "ok.json").p_seg, 0.5);
  std::ofstream(dir / "bad.json") << R"({"schema":"acsim.config/1","p_seg":5})";
  EXPECT_THROW(LoadConfig(dir / "bad.json"), ConfigError);
  std::ofstream(dir / "unknown.json") << R"({"psg":0.5})";
  EXPECT_THROW(LoadConfig(dir / "unknown.json"), ConfigError);
  GenerationJob job;
  job.output_dir = dir;
  job.count = 0;
  EXPECT_THROW(job.Validate(), ConfigError);
  EXPECT_EQ(ExampleId("S-N", 42), "S-N/ex000042");
}

}  // namespace
}  // namespace acsim
