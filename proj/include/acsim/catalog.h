// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_CATALOG_H_
#define ACSIM_CATALOG_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "acsim/acoustic_sim.h"
#include "acsim/audio_clip.h"
#include "acsim/config.h"

namespace acsim {

struct SpeechAsset {
  std::string id;
  std::string speaker_id;
  std::string uri;
  AudioClip clip;
};

struct StaticNoiseAsset {
  std::string id;
  std::string uri;
  AudioClip clip;
};

struct EventNoiseAsset {
  std::string id;
  std::string label;
  std::string uri;
  AudioClip clip;
};

struct RirAsset {
  std::string id;
  std::string uri;
  RoomImpulseResponse rir;
};

// Typed registry of loaded assets. Ids are unique across all kinds.
class AssetCatalog {
 public:
  void AddSpeech(SpeechAsset asset);
  void AddStaticNoise(StaticNoiseAsset asset);
  void AddEventNoise(EventNoiseAsset asset);
  void AddRir(RirAsset asset);

  const std::vector<SpeechAsset>& speech() const { return speech_; }
  const std::vector<StaticNoiseAsset>& static_noise() const { return static_noise_; }
  const std::vector<EventNoiseAsset>& event_noise() const { return event_noise_; }
  const std::vector<RirAsset>& rirs() const { return rirs_; }

  // Ids of all RIRs in insertion order.
  std::vector<std::string> RirIds() const;
  std::size_t NumDistinctSpeakers() const;

  // Throw CatalogError when the id is unknown or of another kind.
  const SpeechAsset& FindSpeech(const std::string& id) const;
  const StaticNoiseAsset& FindStaticNoise(const std::string& id) const;
  const EventNoiseAsset& FindEventNoise(const std::string& id) const;
  const RoomImpulseResponse& FindRir(const std::string& id) const;

  bool Contains(const std::string& id) const { return index_.count(id) > 0; }

 private:
  struct Entry {
    AssetKind kind;
    std::size_t index;
  };
  const Entry& Lookup(const std::string& id, AssetKind kind) const;
  void Register(const std::string& id, AssetKind kind, std::size_t index);

  std::vector<SpeechAsset> speech_;
  std::vector<StaticNoiseAsset> static_noise_;
  std::vector<EventNoiseAsset> event_noise_;
  std::vector<RirAsset> rirs_;
  std::map<std::string, Entry> index_;
};

}  // namespace acsim

#endif  // ACSIM_CATALOG_H_
