// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_WAV_IO_H_
#define ACSIM_WAV_IO_H_

#include <filesystem>
#include <span>
#include <vector>

#include "acsim/audio_clip.h"

namespace acsim {

// RIFF/WAVE reader for PCM (8/16/24/32-bit) and IEEE float (32/64-bit),
// including WAVE_FORMAT_EXTENSIBLE. Returns one clip per channel with
// samples scaled to [-1, 1). Throws DataError on malformed input.
std::vector<AudioClip> ReadWav(const std::filesystem::path& path);

// Reads and averages all channels.
AudioClip ReadWavMono(const std::filesystem::path& path);

// Writes 32-bit float WAV with one channel per clip. All clips must share
// length and sample rate.
void WriteWavFloat(const std::filesystem::path& path,
                   std::span<const AudioClip> channels);
void WriteWavFloat(const std::filesystem::path& path, const AudioClip& clip);

// 16-bit PCM writer, used for test fixtures and interchange.
void WriteWavPcm16(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace acsim

#endif  // ACSIM_WAV_IO_H_
