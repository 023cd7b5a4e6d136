// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/catalog.h"

#include <set>

#include <fmt/format.h>

#include "acsim/errors.h"

namespace acsim {

void AssetCatalog::Register(const std::string& id, AssetKind kind,
                            std::size_t index) {
  if (id.empty()) throw DataError("asset id must not be empty");
  if (!index_.emplace(id, Entry{kind, index}).second) {
    throw CatalogError(fmt::format("duplicate asset id '{}'", id));
  }
}

void AssetCatalog::AddSpeech(SpeechAsset asset) {
  if (asset.speaker_id.empty()) {
    throw DataError(fmt::format("speech asset '{}' has no speaker id", asset.id));
  }
  Register(asset.id, AssetKind::kSpeech, speech_.size());
  speech_.push_back(std::move(asset));
}

void AssetCatalog::AddStaticNoise(StaticNoiseAsset asset) {
  Register(asset.id, AssetKind::kStaticNoise, static_noise_.size());
  static_noise_.push_back(std::move(asset));
}

void AssetCatalog::AddEventNoise(EventNoiseAsset asset) {
  Register(asset.id, AssetKind::kEventNoise, event_noise_.size());
  event_noise_.push_back(std::move(asset));
}

void AssetCatalog::AddRir(RirAsset asset) {
  Register(asset.id, AssetKind::kRir, rirs_.size());
  rirs_.push_back(std::move(asset));
}

std::vector<std::string> AssetCatalog::RirIds() const {
  std::vector<std::string> ids;
  ids.reserve(rirs_.size());
  for (const auto& r : rirs_) ids.push_back(r.id);
  return ids;
}

std::size_t AssetCatalog::NumDistinctSpeakers() const {
  std::set<std::string> speakers;
  for (const auto& s : speech_) speakers.insert(s.speaker_id);
  return speakers.size();
}

const AssetCatalog::Entry& AssetCatalog::Lookup(const std::string& id,
                                                AssetKind kind) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw CatalogError(fmt::format("unknown asset id '{}'", id));
  }
  if (it->second.kind != kind) {
    throw CatalogError(fmt::format("asset '{}' is {}, expected {}", id,
                                   AssetKindName(it->second.kind),
                                   AssetKindName(kind)));
  }
  return it->second;
}

const SpeechAsset& AssetCatalog::FindSpeech(const std::string& id) const {
  return speech_[Lookup(id, AssetKind::kSpeech).index];
}

const StaticNoiseAsset& AssetCatalog::FindStaticNoise(const std::string& id) const {
  return static_noise_[Lookup(id, AssetKind::kStaticNoise).index];
}

const EventNoiseAsset& AssetCatalog::FindEventNoise(const std::string& id) const {
  return event_noise_[Lookup(id, AssetKind::kEventNoise).index];
}

const RoomImpulseResponse& AssetCatalog::FindRir(const std::string& id) const {
  return rirs_[Lookup(id, AssetKind::kRir).index].rir;
}

}  // namespace acsim
