// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/wav_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <fmt/format.h>

#include "acsim/errors.h"

namespace acsim {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

double DecodeSample(const unsigned char* p, std::uint16_t format, int bits) {
  if (format == kFormatFloat) {
    if (bits == 32) {
      return static_cast<double>(std::bit_cast<float>(ReadU32(p)));
    }
    std::uint64_t v = static_cast<std::uint64_t>(ReadU32(p)) |
                      (static_cast<std::uint64_t>(ReadU32(p + 4)) << 32);
    return std::bit_cast<double>(v);
  }
  switch (bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default:  // 32
      return static_cast<std::int32_t>(ReadU32(p)) / 2147483648.0;
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError(fmt::format("failed writing '{}'", path.string()));
}

std::string WavHeader(std::uint16_t format, int channels, int rate, int bits,
                      std::uint32_t data_bytes) {
  std::string h;
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  h += "RIFF";
  PutU32(h, 36 + data_bytes);
  h += "WAVEfmt ";
  PutU32(h, 16);
  PutU16(h, format);
  PutU16(h, static_cast<std::uint16_t>(channels));
  PutU32(h, static_cast<std::uint32_t>(rate));
  PutU32(h, static_cast<std::uint32_t>(rate) * block_align);
  PutU16(h, block_align);
  PutU16(h, static_cast<std::uint16_t>(bits));
  h += "data";
  PutU32(h, data_bytes);
  return h;
}

}  // namespace

std::vector<AudioClip> ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open audio file '{}'", path.string()));
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  const auto fail = [&](const std::string& why) {
    return DataError(fmt::format("'{}': {}", path.string(), why));
  };
  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  std::uint16_t format = 0;
  int channels = 0, rate = 0, bits = 0;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;
  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::uint32_t chunk_size = ReadU32(data + pos + 4);
    const unsigned char* body = data + pos + 8;
    const std::size_t available = std::min<std::size_t>(chunk_size, size - pos - 8);
    if (std::memcmp(data + pos, "fmt ", 4) == 0) {
      if (available < 16) throw fail("truncated fmt chunk");
      format = ReadU16(body);
      channels = ReadU16(body + 2);
      rate = static_cast<int>(ReadU32(body + 4));
      bits = ReadU16(body + 14);
      if (format == kFormatExtensible) {
        if (available < 26) throw fail("truncated extensible fmt chunk");
        format = ReadU16(body + 24);
      }
    } else if (std::memcmp(data + pos, "data", 4) == 0) {
      pcm = body;
      pcm_bytes = available;
    }
    pos += 8 + chunk_size + (chunk_size & 1);
  }
  if (channels == 0) throw fail("missing fmt chunk");
  if (pcm == nullptr) throw fail("missing data chunk");
  if (rate <= 0) throw fail("invalid sample rate");
  const bool pcm_ok = format == kFormatPcm &&
                      (bits == 8 || bits == 16 || bits == 24 || bits == 32);
  const bool float_ok = format == kFormatFloat && (bits == 32 || bits == 64);
  if (!pcm_ok && !float_ok) {
    throw fail(fmt::format("unsupported encoding (format {}, {} bits)", format, bits));
  }

  const std::size_t sample_bytes = static_cast<std::size_t>(bits / 8);
  const std::size_t frame_bytes = sample_bytes * static_cast<std::size_t>(channels);
  const std::size_t frames = pcm_bytes / frame_bytes;
  std::vector<std::vector<double>> chans(static_cast<std::size_t>(channels),
                                         std::vector<double>(frames));
  for (std::size_t f = 0; f < frames; ++f) {
    for (int c = 0; c < channels; ++c) {
      const double v = DecodeSample(pcm + f * frame_bytes + c * sample_bytes, format, bits);
      if (!std::isfinite(v)) {
        throw fail(fmt::format("non-finite sample at frame {}", f));
      }
      chans[static_cast<std::size_t>(c)][f] = v;
    }
  }
  std::vector<AudioClip> out;
  for (auto& ch : chans) out.emplace_back(std::move(ch), rate);
  return out;
}

AudioClip ReadWavMono(const std::filesystem::path& path) {
  std::vector<AudioClip> chans = ReadWav(path);
  if (chans.size() == 1) return std::move(chans.front());
  std::vector<double> mono(chans.front().size(), 0.0);
  for (const AudioClip& c : chans) {
    for (std::size_t i = 0; i < mono.size(); ++i) mono[i] += c[i];
  }
  for (double& v : mono) v /= static_cast<double>(chans.size());
  return AudioClip(std::move(mono), chans.front().sample_rate());
}

void WriteWavFloat(const std::filesystem::path& path,
                   std::span<const AudioClip> channels) {
  if (channels.empty()) throw ConfigError("WAV needs at least one channel");
  const std::size_t frames = channels.front().size();
  const int rate = channels.front().sample_rate();
  for (const AudioClip& c : channels) {
    if (c.size() != frames || c.sample_rate() != rate) {
      throw ConfigError("WAV channels must share length and sample rate");
    }
  }
  const auto data_bytes =
      static_cast<std::uint32_t>(frames * channels.size() * sizeof(float));
  std::string bytes = WavHeader(kFormatFloat, static_cast<int>(channels.size()), rate,
                                32, data_bytes);
  bytes.reserve(bytes.size() + data_bytes);
  for (std::size_t f = 0; f < frames; ++f) {
    for (const AudioClip& c : channels) {
      PutU32(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(c[f])));
    }
  }
  WriteFile(path, bytes);
}

void WriteWavFloat(const std::filesystem::path& path, const AudioClip& clip) {
  WriteWavFloat(path, std::span<const AudioClip>(&clip, 1));
}

void WriteWavPcm16(const std::filesystem::path& path, const AudioClip& clip) {
  const auto data_bytes = static_cast<std::uint32_t>(clip.size() * 2);
  std::string bytes = WavHeader(kFormatPcm, 1, clip.sample_rate(), 16, data_bytes);
  for (std::size_t i = 0; i < clip.size(); ++i) {
    const double scaled = std::clamp(clip[i], -1.0, 32767.0 / 32768.0) * 32768.0;
    PutU16(bytes, static_cast<std::uint16_t>(
                      static_cast<std::int16_t>(std::lround(scaled))));
  }
  WriteFile(path, bytes);
}

}  // namespace acsim
