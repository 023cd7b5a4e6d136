// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/scenario.h"

#include <fmt/format.h>

#include "acsim/errors.h"

namespace acsim {

void ScenarioSpec::Validate() const {
  if (speakers != 1 && speakers != 2) {
    throw ConfigError(fmt::format("scenario must have 1 or 2 speakers, got {}", speakers));
  }
  if (!static_allowed) {
    throw ConfigError("every scenario includes static noise");
  }
}

std::string ScenarioSpec::Tag() const {
  Validate();
  std::string tag = speakers == 2 ? "D-" : "S-";
  if (reverb_allowed && event_allowed) return tag + "All";
  if (event_allowed) return tag + "NE";
  if (reverb_allowed) return tag + "NR";
  return tag + "N";
}

ScenarioSpec ScenarioSpec::FromTag(std::string_view tag) {
  for (const ScenarioSpec& s : All()) {
    if (s.Tag() == tag) return s;
  }
  throw ConfigError(fmt::format(
      "unknown scenario '{}' (expected D|S followed by -All, -NE, -NR or -N)", tag));
}

std::vector<ScenarioSpec> ScenarioSpec::All() {
  std::vector<ScenarioSpec> out;
  for (int speakers : {2, 1}) {
    out.push_back({speakers, true, true, true});
    out.push_back({speakers, false, true, true});
    out.push_back({speakers, true, false, true});
    out.push_back({speakers, false, false, true});
  }
  return out;
}

}  // namespace acsim
