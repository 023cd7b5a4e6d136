// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_SPECTRAL_H_
#define ACSIM_SPECTRAL_H_

#include <cstddef>
#include <vector>

#include "acsim/audio_clip.h"

namespace acsim {

enum class WindowType { kHann, kRectangular };

struct StftConfig {
  std::size_t fft_length = 1024;
  std::size_t hop_length = 256;
  WindowType window = WindowType::kHann;

  // Hann window with hop = fft_length / 4.
  static StftConfig Standard(std::size_t fft_length);

  // Throws ConfigError unless 0 < hop <= fft and fft is a power of two.
  void Validate() const;
};

// HTK mel scale, triangular filters over the one-sided power spectrum.
struct MelConfig {
  std::size_t fft_length = 1024;
  std::size_t hop_length = 256;
  std::size_t n_mels = 128;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;

  void Validate(int sample_rate_hz) const;
};

// Dense row-major (frames x bins) real matrix.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t frames, std::size_t bins)
      : frames_(frames), bins_(bins), data_(frames * bins, 0.0) {}

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  double& at(std::size_t frame, std::size_t bin) {
    return data_[frame * bins_ + bin];
  }
  double at(std::size_t frame, std::size_t bin) const {
    return data_[frame * bins_ + bin];
  }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::vector<double> data_;
};

std::vector<double> MakeWindow(WindowType type, std::size_t length);

// Number of frames for a clip of `num_samples`: num_samples / hop + 1. The
// clip is zero-padded by fft_length / 2 on the left (centered frames) and as
// needed on the right.
std::size_t NumStftFrames(std::size_t num_samples, std::size_t hop_length);

// |STFT|, shape (NumStftFrames, fft_length / 2 + 1).
Spectrogram StftMagnitude(const AudioClip& clip, const StftConfig& cfg);

double HzToMel(double hz);
double MelToHz(double mel);

// Filterbank weights, shape (n_mels, fft_length / 2 + 1). Filter m rises from
// edge m to edge m+1 and falls to edge m+2, edges equally spaced in mel.
Spectrogram MelFilterbank(const MelConfig& cfg, int sample_rate_hz);

// Mel filterbank applied to the Hann-windowed power spectrogram,
// shape (frames, n_mels).
Spectrogram MelSpectrogram(const AudioClip& clip, const MelConfig& cfg);

}  // namespace acsim

#endif  // ACSIM_SPECTRAL_H_
