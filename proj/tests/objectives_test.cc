// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "acsim/errors.h"
#include "acsim/objectives.h"
#include "oracles.h"
#include "test_util.h"

namespace acsim {
namespace {

using testing::WhiteNoise;

std::vector<double> V(const AudioClip& c) { return {c.samples().begin(), c.samples().end()}; }

AudioClip Add(const AudioClip& a, const AudioClip& b, double gb = 1.0) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + gb * b[i];
  return AudioClip(std::move(out), a.sample_rate());
}

// Component of b orthogonal to a.
AudioClip Orthogonalize(const AudioClip& a, const AudioClip& b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return Add(b, a, -dot / a.Energy());
}

TEST(SiSdrTest, ClosedFormOrthogonalNoise) {
  const AudioClip s = WhiteNoise(1, 16000, 0.3);
  AudioClip n = Orthogonalize(s, WhiteNoise(2, 16000, 0.3));
  n = n.Scaled(std::sqrt(s.Energy() / (10.0 * n.Energy())));
  EXPECT_NEAR(SiSdr(s, Add(s, n)), 10.0, 1e-9);
  // Scaling the estimate leaves the value unchanged.
  EXPECT_NEAR(SiSdr(s, Add(s, n).Scaled(-3.7)), 10.0, 1e-9);
}

TEST(SiSdrTest, MatchesOracle) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  for (int t = 0; t < 20; ++t) {
    const AudioClip ref = WhiteNoise(10 + t, 4000, u(gen));
    const AudioClip est = Add(ref.Scaled(u(gen)), WhiteNoise(100 + t, 4000, u(gen)));
    const double want = testing::OracleSiSdr(V(ref), V(est));
    EXPECT_NEAR(SiSdr(ref, est), want, 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST(SiSdrTest, CapAndDegenerateCases) {
  const AudioClip s = WhiteNoise(4, 1000, 0.3);
  EXPECT_EQ(SiSdr(s, s), 60.0);
  EXPECT_EQ(SiSdr(s, s, 30.0), 30.0);
  EXPECT_EQ(SiSdr(s, AudioClip::Silence(1000, 16000)), -60.0);
  EXPECT_THROW(SiSdr(AudioClip::Silence(1000, 16000), s), SilentReferenceError);
  EXPECT_THROW(SiSdr(s, AudioClip::Silence(999, 16000)), ConfigError);
}

TEST(SilenceSdrTest, AnalyticValues) {
  const AudioClip s = WhiteNoise(5, 1000, 0.3);
  EXPECT_NEAR(SilenceSdr(s, s), 0.0, 1e-12);
  EXPECT_NEAR(SilenceSdr(s, s.Scaled(0.1)), 20.0, 1e-9);
  EXPECT_EQ(SilenceSdr(s, AudioClip::Silence(1000, 16000)), 60.0);
  EXPECT_THROW(SilenceSdr(AudioClip::Silence(1000, 16000), s), SilentReferenceError);
  const AudioClip e = WhiteNoise(6, 1000, 0.01);
  EXPECT_NEAR(SilenceSdr(s, e), testing::OracleSilenceSdr(V(s), V(e)), 1e-9);
}

TEST(SpectralLossTest, MatchOracles) {
  const AudioClip ref = WhiteNoise(7, 6000, 0.2);
  const AudioClip est = Add(ref.Scaled(0.8), WhiteNoise(8, 6000, 0.05));
  const double mstft = testing::OracleMstft(V(ref), V(est));
  EXPECT_NEAR(MstftLoss(ref, est), mstft, 1e-9 * mstft);
  const double mel = testing::OracleMel(V(ref), V(est), 16000.0);
  EXPECT_NEAR(MelLoss(ref, est), mel, 1e-9 * mel);
  const double l2 = testing::OracleTimeL2(V(ref), V(est));
  EXPECT_NEAR(TimeL2Loss(ref, est), l2, 1e-12 * l2);
}

TEST(SpectralLossTest, ZeroForIdenticalAndSymmetric) {
  const AudioClip a = WhiteNoise(9, 5000, 0.2);
  const AudioClip b = WhiteNoise(10, 5000, 0.2);
  EXPECT_EQ(MstftLoss(a, a), 0.0);
  EXPECT_EQ(MelLoss(a, a), 0.0);
  EXPECT_EQ(TimeL2Loss(a, a), 0.0);
  EXPECT_NEAR(MstftLoss(a, b), MstftLoss(b, a), 1e-9);
  EXPECT_GT(MstftLoss(a, b), 0.0);
  EXPECT_THROW(MelLoss(a, WhiteNoise(1, 10, 0.1)), ConfigError);
}

TEST(CombinedLossTest, IdentityGivesNegativeCap) {
  const AudioClip s = WhiteNoise(11, 8000, 0.3);
  const LossBreakdown l = CombinedLoss(s, s);
  EXPECT_EQ(l.l_time, 0.0);
  EXPECT_EQ(l.l_mstft, 0.0);
  EXPECT_EQ(l.l_mel, 0.0);
  EXPECT_EQ(l.l_sdr, -60.0);
  EXPECT_EQ(l.total, -60.0);
}

TEST(CombinedLossTest, WeightedSum) {
  const AudioClip ref = WhiteNoise(12, 8000, 0.3);
  const AudioClip est = Add(ref, WhiteNoise(13, 8000, 0.1));
  const LossWeights w;
  EXPECT_EQ(w.lambda_mstft, 10.0);
  EXPECT_EQ(w.lambda_mel, 10.0);
  EXPECT_EQ(w.lambda_time, 100.0);
  EXPECT_EQ(w.lambda_sdr, 1.0);
  const LossBreakdown l = CombinedLoss(ref, est, w);
  EXPECT_NEAR(l.total, 100.0 * l.l_time + 10.0 * l.l_mstft + 10.0 * l.l_mel + l.l_sdr, 1e-9);
  EXPECT_NEAR(l.l_sdr, -SiSdr(ref, est), 1e-12);
}

TEST(CombinedLossTest, SilentReferenceUsesEstimateEnergy) {
  const AudioClip silent = AudioClip::Silence(4000, 16000);
  const AudioClip est = WhiteNoise(14, 4000, 0.01);
  const LossBreakdown l = CombinedLoss(silent, est);
  EXPECT_NEAR(l.l_sdr, 10.0 * std::log10(est.Energy() + 1e-8), 1e-12);
  EXPECT_NEAR(CombinedLoss(silent, silent).l_sdr, -80.0, 1e-12);
}

// Exhaustive search written without next_permutation: recursive assignment.
void Search(const std::vector<double>& m, std::size_t n, std::vector<std::size_t>& cur,
            std::vector<bool>& used, bool maximize, std::vector<std::size_t>& best,
            double& best_score) {
  if (cur.size() == n) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += m[r * n + cur[r]];
    s /= n;
    // Depth-first over ascending choices visits permutations lexicographically.
    if (best.empty() || (maximize ? s > best_score : s < best_score)) {
      best = cur;
      best_score = s;
    }
    return;
  }
  for (std::size_t e = 0; e < n; ++e) {
    if (used[e]) continue;
    used[e] = true;
    cur.push_back(e);
    Search(m, n, cur, used, maximize, best, best_score);
    cur.pop_back();
    used[e] = false;
  }
}

TEST(PitTest, MatchesBruteForce) {
  std::mt19937_64 gen(15);
  std::uniform_int_distribution<int> small(0, 3);  // frequent ties
  std::normal_distribution<double> normal;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int inst = 0; inst < 200; ++inst) {
      std::vector<double> m(n * n);
      for (double& v : m) v = inst % 2 ? small(gen) : normal(gen);
      for (bool maximize : {false, true}) {
        std::vector<std::size_t> cur, best;
        std::vector<bool> used(n, false);
        double best_score = 0.0;
        Search(m, n, cur, used, maximize, best, best_score);
        const PitScore got = PitResolve(
            n, [&](std::size_t r, std::size_t e) { return m[r * n + e]; },
            maximize ? Objective::kMaximize : Objective::kMinimize);
        ASSERT_EQ(got.permutation, best);
        ASSERT_EQ(got.aggregate, best_score);
        for (std::size_t r = 0; r < n; ++r) EXPECT_EQ(got.per_channel[r], m[r * n + best[r]]);
      }
    }
  }
}

TEST(PitTest, TiesPickSmallestPermutation) {
  const PitScore s = PitResolve(3, [](std::size_t, std::size_t) { return 1.0; },
                                Objective::kMinimize);
  EXPECT_EQ(s.permutation, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(PitResolve(0, [](std::size_t, std::size_t) { return 0.0; },
                          Objective::kMinimize),
               ConfigError);
  EXPECT_THROW(PitResolve(9, [](std::size_t, std::size_t) { return 0.0; },
                          Objective::kMinimize),
               ConfigError);
}

TEST(PitTest, SwappedChannelsRecovered) {
  const std::vector<AudioClip> refs = {WhiteNoise(16, 4000, 0.3), WhiteNoise(17, 4000, 0.3)};
  const std::vector<AudioClip> ests = {refs[1], refs[0]};
  const AudioClip mix = Add(refs[0], refs[1]);
  const TwoSpeakerScores s = EvaluateTwoSpeaker(refs, ests, mix);
  EXPECT_EQ(s.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(s.si_sdr[0], 60.0);
  const PitLoss l = PitCombinedLoss(refs, ests);
  EXPECT_EQ(l.score.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(l.score.aggregate, -60.0);
}

TEST(EvaluateTest, MixtureBaselineIsZeroImprovement) {
  const std::vector<AudioClip> refs = {WhiteNoise(18, 4000, 0.3), WhiteNoise(19, 4000, 0.2)};
  const AudioClip mix = Add(refs[0], refs[1]);
  const std::vector<AudioClip> ests = {mix, mix};
  const TwoSpeakerScores s = EvaluateTwoSpeaker(refs, ests, mix);
  EXPECT_NEAR(s.si_sdri[0], 0.0, 1e-12);
  EXPECT_NEAR(s.si_sdri[1], 0.0, 1e-12);
  EXPECT_NEAR(s.mean_si_sdri, 0.0, 1e-12);
}

TEST(EvaluateTest, SingleSpeakerProtocol) {
  const AudioClip speaker = WhiteNoise(20, 4000, 0.3);
  const AudioClip noise = WhiteNoise(21, 4000, 0.05);
  const AudioClip mix = Add(speaker, noise);
  const AudioClip silence = AudioClip::Silence(4000, 16000);
  const std::vector<AudioClip> ests = {silence, speaker};
  const SingleSpeakerScores s = EvaluateSingleSpeaker(speaker, ests, mix);
  EXPECT_EQ(s.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(s.si_sdr, 60.0);
  EXPECT_NEAR(s.si_sdri, 60.0 - SiSdr(speaker, mix), 1e-12);
  EXPECT_EQ(s.silence_sdr, 60.0);
  EXPECT_NEAR(s.silence_sdri, 60.0 - SilenceSdr(speaker, mix), 1e-12);

  // Mixture on both channels scores zero improvement on both metrics.
  const std::vector<AudioClip> dup = {mix, mix};
  const SingleSpeakerScores d = EvaluateSingleSpeaker(speaker, dup, mix);
  EXPECT_NEAR(d.si_sdri, 0.0, 1e-12);
  EXPECT_NEAR(d.silence_sdri, 0.0, 1e-12);
}

}  // namespace
}  // namespace acsim
