// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_SCENARIO_H_
#define ACSIM_SCENARIO_H_

#include <string>
#include <string_view>
#include <vector>

namespace acsim {

// Evaluation scenario. Prefix D/S is two speakers / one speaker; the suffix
// selects the acoustic condition:
//   All  static noise + event noise + reverberant speech
//   NE   static noise + event noise, dry speech
//   NR   static noise + reverberant speech
//   N    static noise, dry speech
struct ScenarioSpec {
  int speakers = 2;
  bool reverb_allowed = true;
  bool event_allowed = true;
  bool static_allowed = true;

  // Throws ConfigError unless the fields match one of the eight scenarios.
  void Validate() const;
  std::string Tag() const;

  // Parses "D-All", "S-NE", ... (case-sensitive).
  static ScenarioSpec FromTag(std::string_view tag);
  // The eight scenarios in table order: D-All, D-NE, D-NR, D-N, S-All, ...
  static std::vector<ScenarioSpec> All();

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

}  // namespace acsim

#endif  // ACSIM_SCENARIO_H_
