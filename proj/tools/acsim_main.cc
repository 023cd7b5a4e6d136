// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// acsim: generate, evaluate and inspect simulated separation datasets.
//
//   acsim validate-manifest --catalog assets.jsonl
//   acsim generate --catalog assets.jsonl --out data --scenario all \
//       --count 60 --seed 1234 [--config sim.json] [--jobs 4]
//   acsim evaluate --out data --estimates est --scenario all [--report r.jsonl]
//   acsim describe --out data --scenario D-All --id ex000003 \
//       [--catalog assets.jsonl]

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "acsim/errors.h"
#include "acsim/pipeline.h"
#include "acsim/scenario.h"

namespace {

namespace fs = std::filesystem;
using namespace acsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

std::vector<ScenarioSpec> ParseScenarios(const std::string& arg) {
  if (arg == "all") return ScenarioSpec::All();
  return {ScenarioSpec::FromTag(arg)};
}

int RunValidate(const std::string& catalog_path) {
  const AssetCatalog catalog = LoadCatalog(catalog_path);
  fmt::print("speech: {} ({} speakers)\nstatic: {}\nevent: {}\nrir: {}\n",
             catalog.speech().size(), catalog.NumDistinctSpeakers(),
             catalog.static_noise().size(), catalog.event_noise().size(),
             catalog.rirs().size());
  for (const ScenarioSpec& s : ScenarioSpec::All()) {
    try {
      CheckScenarioSupported(catalog, s);
      fmt::print("{}: supported\n", s.Tag());
    } catch (const ConfigError& e) {
      fmt::print("{}: unsupported ({})\n", s.Tag(), e.what());
    }
  }
  return kExitOk;
}

int RunGenerate(const std::string& catalog_path, const std::string& out,
                const std::string& scenario, std::size_t count, std::uint64_t seed,
                const std::string& config, std::size_t jobs) {
  GenerationJob job;
  job.master_seed = seed;
  job.count = count;
  job.output_dir = out;
  job.jobs = jobs;
  if (!config.empty()) job.cfg = LoadConfig(config);
  const std::vector<ScenarioSpec> scenarios = ParseScenarios(scenario);
  const AssetCatalog catalog = LoadCatalog(catalog_path);
  for (const ScenarioSpec& s : scenarios) {
    job.scenario = s;
    const fs::path manifest = GenerateSet(job, catalog);
    fmt::print("{}: {} examples -> {}\n", s.Tag(), count, manifest.string());
  }
  return kExitOk;
}

int RunEvaluate(const std::string& out, const std::string& estimates,
                const std::string& scenario, const std::string& report_path,
                std::size_t jobs) {
  EvalOptions options;
  options.jobs = jobs;
  EvalReport report;
  for (const ScenarioSpec& s : ParseScenarios(scenario)) {
    const fs::path manifest = fs::path(out) / s.Tag() / kDatasetManifestName;
    if (scenario == "all" && !fs::exists(manifest)) continue;
    const Dataset ds = ReadDataset(manifest);
    std::vector<EvalRow> rows = EvaluateSet(ds, fs::path(estimates) / s.Tag(), options);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  if (report.rows.empty()) throw DataError("no datasets found to evaluate");
  report.summaries = Summarize(report.rows);
  if (!report_path.empty()) WriteReport(report_path, report);
  fmt::print("{}", FormatReportTable(report));
  for (const EvalRow& r : report.rows) {
    if (r.error) fmt::print(stderr, "{}: {}\n", r.id, *r.error);
  }
  return report.has_errors() ? kExitPartial : kExitOk;
}

int RunDescribe(const std::string& out, const std::string& scenario,
                const std::string& id, const std::string& catalog_path) {
  const Dataset ds = ReadDataset(fs::path(out) / scenario / kDatasetManifestName);
  const DatasetRecord& record = FindExample(ds, id);
  fmt::print("{}", DescribeExample(ds, record));
  if (!catalog_path.empty()) {
    const ReplayCheck check = VerifyReplay(ds, record, LoadCatalog(catalog_path));
    fmt::print("replay: mixture {} target1 {} target2 {}\n",
               check.mixture_match ? "match" : "MISMATCH",
               check.target1_match ? "match" : "MISMATCH",
               check.target2_match ? "match" : "MISMATCH");
    if (!check.all()) return kExitData;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic and content simulation for speech separation data"};
  app.require_subcommand(1);

  std::string catalog, out, scenario = "all", config, estimates, report, id;
  std::size_t count = 60, jobs = 0;
  std::uint64_t seed = 0;

  CLI::App* validate = app.add_subcommand("validate-manifest", "Load and check an asset manifest");
  validate->add_option("--catalog,--manifest", catalog, "Asset manifest (JSONL)")->required();

  CLI::App* generate = app.add_subcommand("generate", "Generate scenario sets");
  generate->add_option("--catalog,--manifest", catalog, "Asset manifest (JSONL)")->required();
  generate->add_option("--out", out, "Output root directory")->required();
  generate->add_option("--scenario", scenario, "Scenario tag or 'all'");
  generate->add_option("--count", count, "Examples per scenario")->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed, "Master seed");
  generate->add_option("--config", config, "Simulation config (JSON)");
  generate->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score estimates against a generated set");
  evaluate->add_option("--out", out, "Generated data root")->required();
  evaluate->add_option("--estimates", estimates, "Estimate root (one directory per scenario)")
      ->required();
  evaluate->add_option("--scenario", scenario, "Scenario tag or 'all'");
  evaluate->add_option("--report", report, "Write the report as JSONL");
  evaluate->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

  CLI::App* describe = app.add_subcommand("describe", "Print the replay trace of an example");
  describe->add_option("--out", out, "Generated data root")->required();
  describe->add_option("--scenario", scenario, "Scenario tag")->required();
  describe->add_option("--id", id, "Example id, stem or index")->required();
  describe->add_option("--catalog,--manifest", catalog, "Asset manifest; enables replay check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return RunValidate(catalog);
    if (*generate) return RunGenerate(catalog, out, scenario, count, seed, config, jobs);
    if (*evaluate) return RunEvaluate(out, estimates, scenario, report, jobs);
    if (*describe) return RunDescribe(out, scenario, id, catalog);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
