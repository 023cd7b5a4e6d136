// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_SERIALIZATION_H_
#define ACSIM_SERIALIZATION_H_

#include <string_view>

#include <nlohmann/json.hpp>

#include "acsim/acoustic_sim.h"
#include "acsim/config.h"
#include "acsim/content_sim.h"

namespace acsim {

// Record schema identifiers. Readers reject any other value.
inline constexpr std::string_view kConfigSchema = "acsim.config/1";
inline constexpr std::string_view kAssetSchema = "acsim.asset/1";
inline constexpr std::string_view kDatasetSchema = "acsim.dataset/1";
inline constexpr std::string_view kExampleSchema = "acsim.example/1";
inline constexpr std::string_view kReportRowSchema = "acsim.eval_row/1";
inline constexpr std::string_view kReportSummarySchema = "acsim.eval_summary/1";

// Readers throw DataError naming the offending field path on a missing,
// mistyped, or unknown field.

nlohmann::json ToJson(const SimulationConfig& cfg);
// Fields missing from `j` keep their defaults; unknown fields are rejected.
// The "schema" field is optional here and checked when present.
SimulationConfig SimulationConfigFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const AcousticPlan& plan);
AcousticPlan AcousticPlanFromJson(const nlohmann::json& j,
                                  std::string_view path = "plan");

nlohmann::json ToJson(const SpliceMap& map);
nlohmann::json ToJson(const ExampleMetadata& metadata);
ExampleMetadata ExampleMetadataFromJson(const nlohmann::json& j,
                                        std::string_view path = "metadata");

}  // namespace acsim

#endif  // ACSIM_SERIALIZATION_H_
