#include "roadsafe/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "json.hpp"
#include "roadsafe/error.hpp"
#include "roadsafe/scenario.hpp"

namespace roadsafe {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream f(p);
  if (!f) throw IngestError("cannot read " + p.string());
  return f;
}

std::string pothole_severity(const std::string& stretch_class) {
  if (stretch_class == "poor") return "high";
  if (stretch_class == "average") return "medium";
  return "low";
}

bool is_kept(const Track& t, const FusionConfig& cfg) { return t.ever_confirmed() && t.span() >= cfg.min_track_frames; }

std::string round1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string_view to_string(IrregularityType t) {
  switch (t) {
    case IrregularityType::Pothole:
      return "pothole";
    case IrregularityType::MissingStreetLight:
      return "missing_street_light";
    case IrregularityType::DefectiveSign:
      return "defective_sign";
    case IrregularityType::HelmetViolation:
      return "helmet_violation";
    case IrregularityType::LaneMarkingAbsence:
      return "lane_marking_absence";
  }
  return "unknown";
}

std::optional<IrregularityType> parse_irregularity_type(std::string_view s) {
  for (auto t : kAllIrregularityTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

SequenceInput load_sequence(const std::filesystem::path& dir) {
  SequenceInput in;
  in.meta = load_video_meta(dir / "meta.json");
  {
    auto f = open_input(dir / "detections.log");
    auto log = parse_detection_log(f, in.meta);
    in.detections = std::move(log.records);
    for (auto& d : log.diagnostics) in.diagnostics.push_back({d.line, "detections.log: " + d.message});
  }
  {
    auto f = open_input(dir / "gps.log");
    auto log = parse_gps_log(f);
    in.gps = std::move(log.samples);
    for (auto& d : log.diagnostics) in.diagnostics.push_back({d.line, "gps.log: " + d.message});
  }
  return in;
}

SequenceResult run_sequence(const SequenceInput& input, const PipelineConfig& config) {
  input.meta.validate();
  config.validate();
  const auto& meta = input.meta;
  const auto& mcfg = config.metrics;

  SequenceResult res;
  res.sequence_id = meta.sequence_id;

  const RouteTrace trace(input.gps, config.max_gps_gap_s);
  const RouteFrames route(trace, meta.fps, meta.frame_count);

  res.tracks = track_sequence(input.detections, meta.frame_count, config.tracker);
  for (const auto& t : res.tracks) {
    if (is_kept(t, config.fusion)) res.fused.push_back(fuse_track(t));
  }

  std::vector<FusedTrack> riders, motorcycles;
  for (const auto& f : res.fused) {
    if (f.track.cls == ObjectClass::Rider) riders.push_back(f);
    if (f.track.cls == ObjectClass::Motorcycle) motorcycles.push_back(f);
  }
  res.groups = associate_riders(riders, motorcycles, config.fusion);

  std::map<TrackId, GeoTaggedObject> tag_of;
  for (const auto& f : res.fused) {
    const auto cls = f.track.cls;
    if (cls == ObjectClass::StreetLight || cls == ObjectClass::TrafficSign || cls == ObjectClass::Pothole ||
        cls == ObjectClass::Motorcycle) {
      if (auto g = geotag(f, route, meta.sequence_id)) {
        tag_of.emplace(f.track.id, *g);
        if (cls != ObjectClass::Motorcycle) res.geotags.push_back(std::move(*g));
      }
    }
  }

  // Lane fraction per frame; several records in one frame are averaged.
  std::vector<std::optional<double>> lane(static_cast<std::size_t>(meta.frame_count));
  std::vector<int> lane_n(lane.size(), 0);
  for (const auto& d : input.detections) {
    if (d.cls != ObjectClass::LaneMarking || !d.attrs.lane_fraction) continue;
    const auto f = static_cast<std::size_t>(d.frame);
    lane[f] = lane[f].value_or(0.0) + *d.attrs.lane_fraction;
    ++lane_n[f];
  }
  for (std::size_t f = 0; f < lane.size(); ++f) {
    if (lane_n[f] > 1) *lane[f] /= lane_n[f];
  }
  res.lane_stretches = lane_stretches(lane, route, mcfg, meta.sequence_id);

  std::vector<GeoTaggedObject> potholes, lights, signs;
  for (const auto& g : res.geotags) {
    if (g.object_type == ObjectClass::Pothole) potholes.push_back(g);
    if (g.object_type == ObjectClass::StreetLight) lights.push_back(g);
    if (g.object_type == ObjectClass::TrafficSign) signs.push_back(g);
  }
  res.pothole_stretches = pothole_stretches(potholes, route, mcfg, meta.sequence_id).stretches;

  auto& m = res.metrics;
  m.sequence_id = meta.sequence_id;
  m.route_length_m = route.total_length();
  for (const auto& f : res.fused) {
    if (f.track.cls != ObjectClass::TrafficSign) continue;
    if (auto v = visibility_range(f.track, route)) m.sign_visibility_m.push_back(*v);
    if (f.fused_attr) {
      ++m.fused_signs;
      if (*f.fused_attr == to_string(SignState::Defective)) ++m.defective_signs;
    }
  }
  std::vector<double> light_offsets;
  for (const auto& g : lights) light_offsets.push_back(g.route_offset);
  std::sort(light_offsets.begin(), light_offsets.end());
  m.streetlights = static_cast<int>(light_offsets.size());
  m.streetlight_gap_mean = streetlight_spacing(light_offsets);
  m.lane_stretches = res.lane_stretches;
  m.pothole_stretches = res.pothole_stretches;
  for (const auto& g : res.groups) {
    for (const auto& r : g.riders) {
      if (!r.fused_attr) continue;
      ++m.grouped_riders;
      if (*r.fused_attr == to_string(HelmetState::NoHelmet)) ++m.no_helmet_riders;
    }
  }

  // Irregularities, numbered per type in route order.
  std::vector<Irregularity> items;
  auto push = [&](IrregularityType type, GeoPoint pos, double offset, std::string severity,
                  std::optional<std::int64_t> track, std::optional<FrameIndex> anchor, std::string detail,
                  std::vector<FrameIndex> evidence) {
    Irregularity it;
    it.type = type;
    it.sequence_id = meta.sequence_id;
    it.position = pos;
    it.route_offset = offset;
    it.severity = std::move(severity);
    it.track_id = track;
    it.anchor_frame = anchor;
    it.detail = std::move(detail);
    it.evidence = std::move(evidence);
    items.push_back(std::move(it));
  };

  for (const auto& g : potholes) {
    const auto& st =
        res.pothole_stretches[stretch_index(g.route_offset, mcfg.pothole_stretch_m, res.pothole_stretches.size())];
    push(IrregularityType::Pothole, g.position, g.route_offset, pothole_severity(st.label), g.track_id, g.anchor_frame, st.label,
         g.evidence);
  }
  for (std::size_t i = 1; i < light_offsets.size(); ++i) {
    const double gap = light_offsets[i] - light_offsets[i - 1];
    if (gap <= mcfg.streetlight_gap_alert_m) continue;
    const double mid = (light_offsets[i] + light_offsets[i - 1]) / 2;
    if (auto p = route.position_at_offset(mid)) {
      push(IrregularityType::MissingStreetLight, *p, mid, gap > 2 * mcfg.streetlight_gap_alert_m ? "high" : "medium",
           std::nullopt, std::nullopt, round1(gap) + " m gap", {});
    }
  }
  for (const auto& g : signs) {
    if (g.fused_attr && *g.fused_attr == to_string(SignState::Defective)) {
      push(IrregularityType::DefectiveSign, g.position, g.route_offset, "medium", g.track_id, g.anchor_frame, *g.fused_attr,
           g.evidence);
    }
  }
  for (const auto& g : res.groups) {
    if (!g.violation) continue;
    auto tag = tag_of.find(g.motorcycle.track.id);
    if (tag == tag_of.end()) continue;
    const bool all = g.no_helmet_riders == static_cast<int>(g.riders.size());
    push(IrregularityType::HelmetViolation, tag->second.position, tag->second.route_offset, all ? "high" : "medium",
         g.group_id, tag->second.anchor_frame, g.plate_text.value_or(""), g.evidence_frames);
  }
  for (const auto& s : res.lane_stretches) {
    if (s.label != "absent" && s.label != "faded") continue;
    const double mid = (s.start_m + s.end_m) / 2;
    if (auto p = route.position_at_offset(mid)) {
      push(IrregularityType::LaneMarkingAbsence, *p, mid, s.label == "absent" ? "high" : "medium", std::nullopt,
           std::nullopt, s.label, {});
    }
  }

  std::stable_sort(items.begin(), items.end(), [](const Irregularity& a, const Irregularity& b) {
    if (a.type != b.type) return a.type < b.type;
    return a.route_offset < b.route_offset;
  });
  std::map<IrregularityType, int> counter;
  for (auto& it : items) {
    it.id = meta.sequence_id + ":" + std::string(to_string(it.type)) + ":" + std::to_string(counter[it.type]++);
  }
  res.irregularities = std::move(items);
  return res;
}

std::string irregularities_to_geojson(std::span<const Irregularity> items) {
  ojson fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = ojson::array();
  for (const auto& it : items) {
    ojson f;
    f["type"] = "Feature";
    f["id"] = it.id;
    f["geometry"] = {{"type", "Point"}, {"coordinates", {it.position.lon, it.position.lat}}};
    ojson p;
    p["id"] = it.id;
    p["type"] = std::string(to_string(it.type));
    p["sequence_id"] = it.sequence_id;
    p["route_offset"] = it.route_offset;
    p["severity"] = it.severity;
    p["track_id"] = it.track_id ? ojson(*it.track_id) : ojson(nullptr);
    p["anchor_frame"] = it.anchor_frame ? ojson(*it.anchor_frame) : ojson(nullptr);
    p["detail"] = it.detail;
    p["evidence"] = it.evidence;
    if (!it.created_at.empty()) p["created_at"] = it.created_at;
    f["properties"] = std::move(p);
    fc["features"].push_back(std::move(f));
  }
  return fc.dump(2);
}

std::vector<Irregularity> irregularities_from_geojson(std::string_view text) {
  std::vector<Irregularity> out;
  try {
    const auto fc = json::parse(text);
    for (const auto& f : fc.at("features")) {
      const auto& p = f.at("properties");
      const auto& c = f.at("geometry").at("coordinates");
      Irregularity it;
      it.id = p.at("id").get<std::string>();
      auto type = parse_irregularity_type(p.at("type").get<std::string>());
      if (!type) throw InvalidArgument("unknown irregularity type in " + it.id);
      it.type = *type;
      it.sequence_id = p.at("sequence_id").get<std::string>();
      it.position = {c.at(1).get<double>(), c.at(0).get<double>()};
      it.route_offset = p.at("route_offset").get<double>();
      it.severity = p.at("severity").get<std::string>();
      if (!p.at("track_id").is_null()) it.track_id = p.at("track_id").get<std::int64_t>();
      if (p.contains("anchor_frame") && !p.at("anchor_frame").is_null()) {
        it.anchor_frame = p.at("anchor_frame").get<FrameIndex>();
      }
      it.detail = p.value("detail", "");
      it.created_at = p.value("created_at", "");
      it.evidence = p.value("evidence", std::vector<FrameIndex>{});
      out.push_back(std::move(it));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad irregularity GeoJSON: ") + e.what());
  }
  return out;
}

namespace {

ojson stretch_to_json(const Stretch& s) {
  ojson j;
  j["start_m"] = s.start_m;
  j["end_m"] = s.end_m;
  j["score"] = s.score ? ojson(*s.score) : ojson(nullptr);
  j["count"] = s.count;
  j["class"] = s.label;
  ojson line = ojson::array();
  for (const auto& p : s.polyline) line.push_back({p.lon, p.lat});
  j["polyline"] = std::move(line);
  return j;
}

Stretch stretch_from_json(const json& j, StretchKind kind, const std::string& seq) {
  Stretch s;
  s.sequence_id = seq;
  s.kind = kind;
  s.start_m = j.at("start_m").get<double>();
  s.end_m = j.at("end_m").get<double>();
  if (!j.at("score").is_null()) s.score = j.at("score").get<double>();
  s.count = j.at("count").get<int>();
  s.label = j.at("class").get<std::string>();
  for (const auto& p : j.at("polyline")) s.polyline.push_back({p.at(1).get<double>(), p.at(0).get<double>()});
  return s;
}

}  // namespace

std::string sequence_metrics_to_json(const SequenceMetrics& m) {
  ojson j;
  j["sequence_id"] = m.sequence_id;
  j["route_length_m"] = m.route_length_m;
  j["sign_visibility_m"] = m.sign_visibility_m;
  j["fused_signs"] = m.fused_signs;
  j["defective_signs"] = m.defective_signs;
  j["streetlight_gap_mean"] = m.streetlight_gap_mean ? ojson(*m.streetlight_gap_mean) : ojson(nullptr);
  j["streetlights"] = m.streetlights;
  j["lane_stretches"] = ojson::array();
  for (const auto& s : m.lane_stretches) j["lane_stretches"].push_back(stretch_to_json(s));
  j["pothole_stretches"] = ojson::array();
  for (const auto& s : m.pothole_stretches) j["pothole_stretches"].push_back(stretch_to_json(s));
  j["grouped_riders"] = m.grouped_riders;
  j["no_helmet_riders"] = m.no_helmet_riders;
  return j.dump(2);
}

SequenceMetrics sequence_metrics_from_json(std::string_view text) {
  SequenceMetrics m;
  try {
    const auto j = json::parse(text);
    m.sequence_id = j.at("sequence_id").get<std::string>();
    m.route_length_m = j.at("route_length_m").get<double>();
    m.sign_visibility_m = j.at("sign_visibility_m").get<std::vector<double>>();
    m.fused_signs = j.at("fused_signs").get<int>();
    m.defective_signs = j.at("defective_signs").get<int>();
    if (!j.at("streetlight_gap_mean").is_null()) m.streetlight_gap_mean = j.at("streetlight_gap_mean").get<double>();
    m.streetlights = j.at("streetlights").get<int>();
    for (const auto& s : j.at("lane_stretches")) {
      m.lane_stretches.push_back(stretch_from_json(s, StretchKind::Lane, m.sequence_id));
    }
    for (const auto& s : j.at("pothole_stretches")) {
      m.pothole_stretches.push_back(stretch_from_json(s, StretchKind::Pothole, m.sequence_id));
    }
    m.grouped_riders = j.at("grouped_riders").get<int>();
    m.no_helmet_riders = j.at("no_helmet_riders").get<int>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad sequence metrics JSON: ") + e.what());
  }
  return m;
}

}  // namespace roadsafe
