// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "acsim/serialization.h"

#include <set>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "acsim/errors.h"

namespace acsim {
namespace {

using nlohmann::json;

// Strict object reader. Every key must be consumed before Finish(), which
// reports the first leftover key as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw DataError(fmt::format("{}: expected an object", path_));
  }

  bool Has(const std::string& key) const { return j_.contains(key); }

  const json& Raw(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) throw DataError(fmt::format("{}: missing field", Sub(key)));
    seen_.insert(key);
    return *it;
  }

  double Double(const std::string& key) {
    const json& v = Raw(key);
    if (!v.is_number()) throw DataError(fmt::format("{}: expected a number", Sub(key)));
    return v.get<double>();
  }

  std::uint64_t Unsigned(const std::string& key) {
    const json& v = Raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw DataError(fmt::format("{}: expected a non-negative integer", Sub(key)));
    }
    return v.get<std::uint64_t>();
  }

  int Int(const std::string& key) {
    const json& v = Raw(key);
    if (!v.is_number_integer()) {
      throw DataError(fmt::format("{}: expected an integer", Sub(key)));
    }
    return v.get<int>();
  }

  bool Bool(const std::string& key) {
    const json& v = Raw(key);
    if (!v.is_boolean()) throw DataError(fmt::format("{}: expected a boolean", Sub(key)));
    return v.get<bool>();
  }

  std::string String(const std::string& key) {
    const json& v = Raw(key);
    if (!v.is_string()) throw DataError(fmt::format("{}: expected a string", Sub(key)));
    return v.get<std::string>();
  }

  std::vector<double> Doubles(const std::string& key) {
    const json& v = Raw(key);
    if (!v.is_array()) throw DataError(fmt::format("{}: expected an array", Sub(key)));
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw DataError(fmt::format("{}[{}]: expected a number", Sub(key), i));
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Range RangeField(const std::string& key) {
    const std::vector<double> v = Doubles(key);
    if (v.size() != 2) throw DataError(fmt::format("{}: expected [lo, hi]", Sub(key)));
    return Range{v[0], v[1]};
  }

  // True when `key` is present and not null.
  bool Present(const std::string& key) {
    if (!Has(key)) return false;
    seen_.insert(key);
    return !j_.at(key).is_null();
  }

  std::string Sub(const std::string& key) const { return path_ + "." + key; }

  void Finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) {
        throw DataError(fmt::format("{}: unknown field", Sub(key)));
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json RangeJson(const Range& r) { return json::array({r.lo, r.hi}); }

json AcousticJson(const AcousticConfig& a) {
  return json{{"p_speed", a.p_speed},
              {"p_volume", a.p_volume},
              {"p_eq", a.p_eq},
              {"p_reverb", a.p_reverb},
              {"speed_range", RangeJson(a.speed_range)},
              {"max_volume_anchors", a.max_volume_anchors},
              {"volume_db_range", RangeJson(a.volume_db_range)},
              {"eq_gain_db_range", RangeJson(a.eq_gain_db_range)},
              {"eq_centers_hz", a.eq_centers_hz},
              {"eq_q", a.eq_q},
              {"drr_scale_range", RangeJson(a.drr_scale_range)},
              {"rt60_scale_range", RangeJson(a.rt60_scale_range)},
              {"direct_window_ms", a.direct_window_ms}};
}

// Reads optional fields into `a`, leaving absent ones at their current value.
void ReadAcoustic(const json& j, const std::string& path, AcousticConfig& a) {
  ObjectReader r(j, path);
  const auto num = [&](const char* key, double& dst) {
    if (r.Has(key)) dst = r.Double(key);
  };
  const auto range = [&](const char* key, Range& dst) {
    if (r.Has(key)) dst = r.RangeField(key);
  };
  num("p_speed", a.p_speed);
  num("p_volume", a.p_volume);
  num("p_eq", a.p_eq);
  num("p_reverb", a.p_reverb);
  range("speed_range", a.speed_range);
  if (r.Has("max_volume_anchors")) a.max_volume_anchors = r.Int("max_volume_anchors");
  range("volume_db_range", a.volume_db_range);
  range("eq_gain_db_range", a.eq_gain_db_range);
  if (r.Has("eq_centers_hz")) a.eq_centers_hz = r.Doubles("eq_centers_hz");
  num("eq_q", a.eq_q);
  range("drr_scale_range", a.drr_scale_range);
  range("rt60_scale_range", a.rt60_scale_range);
  num("direct_window_ms", a.direct_window_ms);
  r.Finish();
}

json SpliceJson(const SpliceMap& map) {
  json out = json::array();
  for (const SpliceSegment& s : map) {
    out.push_back(json::array({s.src_start, s.dst_start, s.length}));
  }
  return out;
}

SpliceMap SpliceFromJson(const json& j, const std::string& path) {
  if (!j.is_array()) throw DataError(fmt::format("{}: expected an array", path));
  SpliceMap out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& s = j[i];
    if (!s.is_array() || s.size() != 3 || !s[0].is_number_unsigned() ||
        !s[1].is_number_unsigned() || !s[2].is_number_unsigned()) {
      throw DataError(
          fmt::format("{}[{}]: expected [src_start, dst_start, length]", path, i));
    }
    out.push_back(SpliceSegment{s[0].get<std::size_t>(), s[1].get<std::size_t>(),
                                s[2].get<std::size_t>()});
  }
  return out;
}

json TrackJson(const TrackRecipe& t) {
  return json{{"asset_id", t.asset_id},
              {"source_offset", t.source_offset},
              {"placement_offset", t.placement_offset},
              {"plan", ToJson(t.plan)},
              {"splice", SpliceJson(t.splice)},
              {"level_db", t.level_db}};
}

TrackRecipe TrackFromJson(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  TrackRecipe t;
  t.asset_id = r.String("asset_id");
  t.source_offset = r.Unsigned("source_offset");
  t.placement_offset = r.Unsigned("placement_offset");
  t.plan = AcousticPlanFromJson(r.Raw("plan"), r.Sub("plan"));
  t.splice = SpliceFromJson(r.Raw("splice"), r.Sub("splice"));
  t.level_db = r.Double("level_db");
  r.Finish();
  return t;
}

json OptionalTrack(const std::optional<TrackRecipe>& t) {
  return t ? TrackJson(*t) : json(nullptr);
}

}  // namespace

json ToJson(const SimulationConfig& c) {
  return json{{"schema", kConfigSchema},
              {"duration_s", c.duration_s},
              {"sample_rate_hz", c.sample_rate_hz},
              {"p_speaker2", c.p_speaker2},
              {"p_static", c.p_static},
              {"p_event", c.p_event},
              {"l1", c.l1},
              {"l2", c.l2},
              {"p_seg", c.p_seg},
              {"p_overlap_removal", c.p_overlap_removal},
              {"speaker1_level_dbfs", RangeJson(c.speaker1_level_dbfs)},
              {"speech_level_db_range", RangeJson(c.speech_level_db_range)},
              {"static_snr_db_range", RangeJson(c.static_snr_db_range)},
              {"event_snr_db_range", RangeJson(c.event_snr_db_range)},
              {"vad_threshold_dbfs", c.vad_threshold_dbfs},
              {"vad_hangover_ms", c.vad_hangover_ms},
              {"acoustic", AcousticJson(c.acoustic)}};
}

SimulationConfig SimulationConfigFromJson(const json& j) {
  ObjectReader r(j, "config");
  SimulationConfig c;
  if (r.Has("schema")) {
    const std::string schema = r.String("schema");
    if (schema != kConfigSchema) {
      throw DataError(fmt::format("config.schema: expected '{}', got '{}'",
                                  kConfigSchema, schema));
    }
  }
  const auto num = [&](const char* key, double& dst) {
    if (r.Has(key)) dst = r.Double(key);
  };
  const auto range = [&](const char* key, Range& dst) {
    if (r.Has(key)) dst = r.RangeField(key);
  };
  num("duration_s", c.duration_s);
  if (r.Has("sample_rate_hz")) c.sample_rate_hz = r.Int("sample_rate_hz");
  num("p_speaker2", c.p_speaker2);
  num("p_static", c.p_static);
  num("p_event", c.p_event);
  num("l1", c.l1);
  num("l2", c.l2);
  num("p_seg", c.p_seg);
  num("p_overlap_removal", c.p_overlap_removal);
  range("speaker1_level_dbfs", c.speaker1_level_dbfs);
  range("speech_level_db_range", c.speech_level_db_range);
  range("static_snr_db_range", c.static_snr_db_range);
  range("event_snr_db_range", c.event_snr_db_range);
  num("vad_threshold_dbfs", c.vad_threshold_dbfs);
  num("vad_hangover_ms", c.vad_hangover_ms);
  if (r.Has("acoustic")) ReadAcoustic(r.Raw("acoustic"), r.Sub("acoustic"), c.acoustic);
  r.Finish();
  return c;
}

json ToJson(const AcousticPlan& p) {
  json out = json::object();
  out["speed_ratio"] = p.speed_ratio ? json(*p.speed_ratio) : json(nullptr);
  if (p.volume_anchors) {
    json anchors = json::array();
    for (const VolumeAnchor& a : *p.volume_anchors) {
      anchors.push_back(json::array({a.position, a.gain_db}));
    }
    out["volume_anchors"] = anchors;
  } else {
    out["volume_anchors"] = nullptr;
  }
  out["pre_reverb_eq"] = p.pre_reverb_eq ? json(*p.pre_reverb_eq) : json(nullptr);
  if (p.reverb) {
    out["reverb"] = json{{"rir_id", p.reverb->rir_id},
                         {"drr_scale", p.reverb->params.drr_scale},
                         {"rt60_scale", p.reverb->params.rt60_scale}};
  } else {
    out["reverb"] = nullptr;
  }
  out["post_eq"] = p.post_eq ? json(*p.post_eq) : json(nullptr);
  return out;
}

AcousticPlan AcousticPlanFromJson(const json& j, std::string_view path) {
  ObjectReader r(j, std::string(path));
  AcousticPlan p;
  if (r.Present("speed_ratio")) p.speed_ratio = r.Double("speed_ratio");
  if (r.Present("volume_anchors")) {
    const json& v = r.Raw("volume_anchors");
    const std::string sub = r.Sub("volume_anchors");
    if (!v.is_array()) throw DataError(fmt::format("{}: expected an array", sub));
    std::vector<VolumeAnchor> anchors;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() ||
          !v[i][1].is_number()) {
        throw DataError(fmt::format("{}[{}]: expected [position, gain_db]", sub, i));
      }
      anchors.push_back(VolumeAnchor{v[i][0].get<double>(), v[i][1].get<double>()});
    }
    p.volume_anchors = std::move(anchors);
  }
  if (r.Present("pre_reverb_eq")) p.pre_reverb_eq = r.Doubles("pre_reverb_eq");
  if (r.Present("reverb")) {
    ObjectReader rv(r.Raw("reverb"), r.Sub("reverb"));
    ReverbPlan reverb;
    reverb.rir_id = rv.String("rir_id");
    reverb.params.drr_scale = rv.Double("drr_scale");
    reverb.params.rt60_scale = rv.Double("rt60_scale");
    rv.Finish();
    p.reverb = std::move(reverb);
  }
  if (r.Present("post_eq")) p.post_eq = r.Doubles("post_eq");
  r.Finish();
  return p;
}

json ToJson(const SpliceMap& map) { return SpliceJson(map); }

json ToJson(const ExampleMetadata& m) {
  const ExampleRecipe& rc = m.recipe;
  const RenderInfo& ri = m.render;
  return json{
      {"recipe",
       {{"seed", rc.seed},
        {"scenario", rc.scenario_tag},
        {"speaker1", TrackJson(rc.speaker1)},
        {"speaker2", OptionalTrack(rc.speaker2)},
        {"static_noise", OptionalTrack(rc.static_noise)},
        {"event", OptionalTrack(rc.event)},
        {"overlap_removal", rc.overlap_removal}}},
      {"render",
       {{"speaker1_gain", ri.speaker1_gain},
        {"speaker2_gain", ri.speaker2_gain},
        {"static_gain", ri.static_gain},
        {"event_gain", ri.event_gain},
        {"speaker1_plan_normalization", ri.speaker1_plan_normalization},
        {"speaker2_plan_normalization", ri.speaker2_plan_normalization},
        {"static_plan_normalization", ri.static_plan_normalization},
        {"event_plan_normalization", ri.event_plan_normalization},
        {"final_normalization", ri.final_normalization}}}};
}

ExampleMetadata ExampleMetadataFromJson(const json& j, std::string_view path) {
  ObjectReader r(j, std::string(path));
  ExampleMetadata m;

  ObjectReader rc(r.Raw("recipe"), r.Sub("recipe"));
  m.recipe.seed = rc.Unsigned("seed");
  m.recipe.scenario_tag = rc.String("scenario");
  m.recipe.speaker1 = TrackFromJson(rc.Raw("speaker1"), rc.Sub("speaker1"));
  const auto optional_track = [&](const char* key, std::optional<TrackRecipe>& dst) {
    if (rc.Present(key)) dst = TrackFromJson(rc.Raw(key), rc.Sub(key));
  };
  optional_track("speaker2", m.recipe.speaker2);
  optional_track("static_noise", m.recipe.static_noise);
  optional_track("event", m.recipe.event);
  m.recipe.overlap_removal = rc.Bool("overlap_removal");
  rc.Finish();

  ObjectReader ri(r.Raw("render"), r.Sub("render"));
  m.render.speaker1_gain = ri.Double("speaker1_gain");
  m.render.speaker2_gain = ri.Double("speaker2_gain");
  m.render.static_gain = ri.Double("static_gain");
  m.render.event_gain = ri.Double("event_gain");
  m.render.speaker1_plan_normalization = ri.Double("speaker1_plan_normalization");
  m.render.speaker2_plan_normalization = ri.Double("speaker2_plan_normalization");
  m.render.static_plan_normalization = ri.Double("static_plan_normalization");
  m.render.event_plan_normalization = ri.Double("event_plan_normalization");
  m.render.final_normalization = ri.Double("final_normalization");
  ri.Finish();

  r.Finish();
  return m;
}

}  // namespace acsim
