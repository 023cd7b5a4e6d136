// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_RANDOM_H_
#define ACSIM_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace acsim {

// Source of random draws. Every simulation stage takes one of these so tests
// can script the exact values a stage sees.
class RandomStream {
 public:
  virtual ~RandomStream() = default;

  // Uniform integer in [lo, hi], both inclusive. Requires lo <= hi.
  virtual std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) = 0;
  // Uniform real in [lo, hi).
  virtual double UniformReal(double lo, double hi) = 0;

  bool Bernoulli(double p) { return UniformReal(0.0, 1.0) < p; }
};

// Mersenne-twister backed stream. The integer and real mappings are written
// out here (not std distributions) so draws are identical across standard
// library implementations.
class SeededStream final : public RandomStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) override;
  double UniformReal(double lo, double hi) override;

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Stable 64-bit FNV-1a hash of a string.
std::uint64_t HashString(std::string_view s);

// Stable seed for one example: hash of (master seed, scenario tag, index).
std::uint64_t DeriveExampleSeed(std::uint64_t master_seed,
                                std::string_view scenario_tag,
                                std::uint64_t index);

// Independent sub-stream seed for a named stage of one example.
std::uint64_t DeriveStageSeed(std::uint64_t example_seed, std::string_view stage);

}  // namespace acsim

#endif  // ACSIM_RANDOM_H_
