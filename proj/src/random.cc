// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/random.h"

#include <fmt/format.h>

#include "acsim/errors.h"

namespace acsim {

std::int64_t SeededStream::UniformInt(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw ConfigError(fmt::format("UniformInt: empty range [{}, {}]", lo, hi));
  }
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());  // full range
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + r % span);
}

double SeededStream::UniformReal(double lo, double hi) {
  // 53 random mantissa bits -> [0, 1).
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t HashString(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t DeriveExampleSeed(std::uint64_t master_seed,
                                std::string_view scenario_tag,
                                std::uint64_t index) {
  return Mix64(Mix64(master_seed ^ HashString(scenario_tag)) + index);
}

std::uint64_t DeriveStageSeed(std::uint64_t example_seed, std::string_view stage) {
  return Mix64(example_seed ^ HashString(stage));
}

}  // namespace acsim
