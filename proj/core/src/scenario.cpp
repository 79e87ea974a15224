#include "roadsafe/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "json.hpp"
#include "roadsafe/error.hpp"
#include "roadsafe/geo.hpp"
#include "roadsafe/geometry.hpp"

namespace roadsafe {
namespace {

constexpr double kLightRadius = 60;
constexpr double kSignRadius = 40;
constexpr double kPotholeRadius = 30;
constexpr double kRiderRadius = 25;

// Physical extent of an object: width and vertical span above the road.
struct Extent {
  double width;
  double z_bottom;
  double z_top;
  double radius;
};

struct WorldObject {
  GroundTruthObject truth;
  Extent extent;
};

bool valid_probability(double p) { return p >= 0 && p <= 1; }

std::optional<BoundingBox> project(const WorldObject& o, double distance, const ScenarioSpec& spec) {
  const auto& cam = spec.camera;
  if (distance < cam.min_distance_m || distance > o.extent.radius) return std::nullopt;
  const double cx = spec.width / 2.0;
  const double cy = spec.height / 2.0;
  const double scale = cam.focal_px / distance;
  const double x0 = cx + scale * (o.truth.lateral_m - o.extent.width / 2);
  const double x1 = cx + scale * (o.truth.lateral_m + o.extent.width / 2);
  const double y0 = cy + scale * (cam.height_m - o.extent.z_top);
  const double y1 = cy + scale * (cam.height_m - o.extent.z_bottom);
  if (x0 < 0 || y0 < 0 || x1 > spec.width || y1 > spec.height) return std::nullopt;
  return BoundingBox{x0, y0, x1 - x0, y1 - y0};
}

std::vector<WorldObject> build_world(const ScenarioSpec& spec) {
  std::vector<WorldObject> world;
  auto add = [&](ObjectClass cls, double offset, double lateral, Extent extent) -> GroundTruthObject& {
    WorldObject o;
    o.truth.id = static_cast<int>(world.size());
    o.truth.cls = cls;
    o.truth.offset_m = offset;
    o.truth.lateral_m = lateral;
    o.truth.position = point_along(spec.waypoints, offset);
    o.extent = extent;
    world.push_back(std::move(o));
    return world.back().truth;
  };

  for (double off : spec.streetlight_offsets) {
    add(ObjectClass::StreetLight, off, spec.streetlight_lateral_m, {1.6, 5.6, 6.5, kLightRadius});
  }
  for (const auto& s : spec.signs) {
    add(ObjectClass::TrafficSign, s.offset_m, s.lateral_m, {0.9, 2.0, 2.9, kSignRadius}).sign_state =
        s.defective ? SignState::Defective : SignState::Normal;
  }
  for (const auto& p : spec.potholes) {
    add(ObjectClass::Pothole, p.offset_m, p.lateral_m, {1.2, 0.0, 0.25, kPotholeRadius});
  }
  for (std::size_t g = 0; g < spec.rider_groups.size(); ++g) {
    const auto& rg = spec.rider_groups[g];
    auto& moto = add(ObjectClass::Motorcycle, rg.offset_m, rg.lateral_m, {0.8, 0.0, 1.1, kRiderRadius});
    moto.group = static_cast<int>(g);
    moto.plate = rg.plate;
    const double n = static_cast<double>(rg.helmets.size());
    for (std::size_t k = 0; k < rg.helmets.size(); ++k) {
      // Riders sit side by side across the motorcycle's width.
      const double lateral = rg.lateral_m + (static_cast<double>(k) - (n - 1) / 2) * 0.6;
      auto& rider = add(ObjectClass::Rider, rg.offset_m, lateral, {0.6, 0.8, 1.8, kRiderRadius});
      rider.group = static_cast<int>(g);
      rider.helmet_state = rg.helmets[k] ? HelmetState::Helmet : HelmetState::NoHelmet;
      if (rg.helmets[k]) {
        add(ObjectClass::Helmet, rg.offset_m, lateral, {0.3, 1.55, 1.85, kRiderRadius}).group = static_cast<int>(g);
      }
    }
  }
  return world;
}

std::optional<double> lane_fraction_at(const ScenarioSpec& spec, double offset) {
  for (const auto& r : spec.lane_profile) {
    if (offset >= r.start_m && offset < r.end_m) return r.fraction;
  }
  return std::nullopt;
}

ConditionRegion condition_at(const ScenarioSpec& spec, double offset) {
  ConditionRegion current;
  for (const auto& r : spec.conditions) {
    if (r.start_m <= offset) current = r;
  }
  return current;
}

bool any_noise(const NoiseModel& n) {
  return n.miss_rate > 0 || n.false_positive_rate > 0 || n.box_jitter_px > 0 || n.attribute_flip_prob > 0 ||
         n.lane_fraction_sigma > 0;
}

BoundingBox clamp_box(BoundingBox b, int width, int height) {
  b.w = std::clamp(b.w, 1.0, static_cast<double>(width));
  b.h = std::clamp(b.h, 1.0, static_cast<double>(height));
  b.x = std::clamp(b.x, 0.0, width - b.w);
  b.y = std::clamp(b.y, 0.0, height - b.h);
  return b;
}

}  // namespace

void ScenarioSpec::validate() const {
  if (waypoints.size() < 2) throw InvalidArgument("scenario route needs at least two waypoints");
  if (!(ego_speed > 0)) throw InvalidArgument("ego speed must be positive");
  if (!(fps > 0)) throw InvalidArgument("fps must be positive");
  if (width <= 0 || height <= 0) throw InvalidArgument("frame dimensions must be positive");
  if (start_hour < 0 || start_hour > 23) throw InvalidArgument("start hour outside [0,23]");
  if (!valid_probability(noise.miss_rate) || !valid_probability(noise.false_positive_rate) ||
      !valid_probability(noise.attribute_flip_prob)) {
    throw InvalidArgument("noise probabilities must lie in [0,1]");
  }
  if (noise.box_jitter_px < 0 || noise.lane_fraction_sigma < 0) throw InvalidArgument("noise sigmas must be >= 0");
  if (noise.max_blip_frames < 1) throw InvalidArgument("max_blip_frames must be at least 1");
  for (const auto& g : rider_groups) {
    if (g.helmets.empty() || g.helmets.size() > 2) throw InvalidArgument("rider groups carry one or two riders");
  }
  if (!(route_length(waypoints) > 0)) throw InvalidArgument("scenario route has zero length");
}

std::vector<double> regular_offsets(double first, double spacing, double route_length) {
  if (!(spacing > 0)) throw InvalidArgument("spacing must be positive");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double o = first + k * spacing;
    if (o > route_length) break;
    out.push_back(o);
  }
  return out;
}

double route_length(const std::vector<GeoPoint>& waypoints) {
  double total = 0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) total += haversine(waypoints[i - 1], waypoints[i]);
  return total;
}

GeoPoint point_along(const std::vector<GeoPoint>& waypoints, double offset_m) {
  if (waypoints.empty()) throw InvalidArgument("empty route");
  if (offset_m <= 0) return waypoints.front();
  double acc = 0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const double seg = haversine(waypoints[i - 1], waypoints[i]);
    if (seg > 0 && acc + seg >= offset_m) {
      const double a = (offset_m - acc) / seg;
      const auto& p = waypoints[i - 1];
      const auto& q = waypoints[i];
      return {p.lat + a * (q.lat - p.lat), p.lon + a * (q.lon - p.lon)};
    }
    acc += seg;
  }
  return waypoints.back();
}

std::vector<GeoPoint> straight_route(GeoPoint origin, double length_m) {
  // Degrees of longitude per meter along the parallel, refined so that the
  // haversine length matches.
  const double rad = std::numbers::pi / 180.0;
  double dlon = length_m / (kEarthRadiusM * std::cos(origin.lat * rad)) / rad;
  for (int i = 0; i < 3; ++i) {
    const double got = haversine(origin, {origin.lat, origin.lon + dlon});
    dlon *= length_m / got;
  }
  return {origin, {origin.lat, origin.lon + dlon}};
}

std::vector<GroundTruthBox> ScenarioOutput::ground_truth_boxes() const {
  std::vector<GroundTruthBox> out;
  out.reserve(observations.size());
  for (const auto& o : observations) out.push_back({o.frame, o.cls, o.box, false});
  return out;
}

ScenarioOutput generate(const ScenarioSpec& spec) {
  spec.validate();
  ScenarioOutput out;
  out.route_length_m = route_length(spec.waypoints);
  const double duration = out.route_length_m / spec.ego_speed;
  const auto frame_count = static_cast<FrameIndex>(std::floor(duration * spec.fps + 1e-9)) + 1;

  out.meta.sequence_id = spec.sequence_id;
  out.meta.fps = spec.fps;
  out.meta.frame_count = frame_count;
  out.meta.width = spec.width;
  out.meta.height = spec.height;

  std::mt19937_64 rng(spec.noise.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool noisy = any_noise(spec.noise);

  const auto world = build_world(spec);
  for (const auto& w : world) out.objects.push_back(w.truth);

  // Objects sorted by offset so each frame scans only the visible window.
  std::vector<std::size_t> by_offset(world.size());
  std::iota(by_offset.begin(), by_offset.end(), std::size_t{0});
  std::stable_sort(by_offset.begin(), by_offset.end(), [&](std::size_t a, std::size_t b) {
    return world[a].truth.offset_m < world[b].truth.offset_m;
  });
  const double max_radius = kLightRadius;

  struct Blip {
    ObjectClass cls;
    BoundingBox box;
    double confidence;
    int frames_left;
  };
  std::vector<Blip> blips;
  // Recent blips (class, box, start frame). A new blip never overlaps one of
  // these, so two blips cannot chain into a longer false track.
  constexpr FrameIndex kBlipIsolationFrames = 30;
  std::vector<std::tuple<ObjectClass, BoundingBox, FrameIndex>> recent_blips;
  std::vector<int> miss_streak(world.size(), 0);

  out.ego_offset.resize(static_cast<std::size_t>(frame_count));
  out.lane_truth.resize(static_cast<std::size_t>(frame_count));
  for (FrameIndex f = 0; f < frame_count; ++f) {
    const double ego = std::min(spec.ego_speed * static_cast<double>(f) / spec.fps, out.route_length_m);
    out.ego_offset[static_cast<std::size_t>(f)] = ego;

    auto first = std::lower_bound(by_offset.begin(), by_offset.end(), ego + spec.camera.min_distance_m,
                                  [&](std::size_t i, double v) { return world[i].truth.offset_m < v; });
    std::vector<std::pair<int, DetectionRecord>> frame_dets;
    for (auto it = first; it != by_offset.end(); ++it) {
      const auto& obj = world[*it];
      const double d = obj.truth.offset_m - ego;
      if (d > max_radius) break;
      auto box = project(obj, d, spec);
      if (!box) continue;
      out.observations.push_back({f, obj.truth.id, obj.truth.cls, *box});

      // Noise draws happen in a fixed order so a seed fully determines the logs.
      bool missed = noisy && unit(rng) < spec.noise.miss_rate;
      int& streak = miss_streak[static_cast<std::size_t>(obj.truth.id)];
      if (missed && spec.noise.max_consecutive_misses >= 0 && streak >= spec.noise.max_consecutive_misses) {
        missed = false;
      }
      DetectionRecord r;
      r.frame = f;
      r.cls = obj.truth.cls;
      r.box = *box;
      r.confidence = 0.9;
      if (noisy) {
        const double j = spec.noise.box_jitter_px;
        const double dx = gauss(rng), dy = gauss(rng), dw = gauss(rng), dh = gauss(rng);
        if (j > 0) {
          r.box = clamp_box({box->x + j * dx, box->y + j * dy, box->w + j * dw, box->h + j * dh}, spec.width,
                            spec.height);
        }
        r.confidence = 0.6 + 0.39 * unit(rng);
      }
      const bool flip = noisy && unit(rng) < spec.noise.attribute_flip_prob;
      if (obj.truth.sign_state) {
        auto s = *obj.truth.sign_state;
        if (flip) s = s == SignState::Normal ? SignState::Defective : SignState::Normal;
        r.attrs.sign_state = s;
      }
      if (obj.truth.helmet_state) {
        auto s = *obj.truth.helmet_state;
        if (flip) s = s == HelmetState::Helmet ? HelmetState::NoHelmet : HelmetState::Helmet;
        r.attrs.helmet_state = s;
      }
      if (obj.truth.cls == ObjectClass::Motorcycle && !obj.truth.plate.empty()) r.attrs.plate_text = obj.truth.plate;

      if (missed) {
        ++streak;
        continue;
      }
      streak = 0;
      frame_dets.emplace_back(obj.truth.id, std::move(r));
    }
    std::sort(frame_dets.begin(), frame_dets.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [id, r] : frame_dets) {
      out.detections.push_back(std::move(r));
      out.detection_object.push_back(id);
    }

    // Spurious short-lived detections.
    if (noisy && spec.noise.false_positive_rate > 0 && unit(rng) < spec.noise.false_positive_rate) {
      static constexpr ObjectClass kBlipClasses[] = {ObjectClass::Pothole, ObjectClass::TrafficSign,
                                                     ObjectClass::StreetLight};
      Blip b;
      b.cls = kBlipClasses[static_cast<std::size_t>(unit(rng) * 3) % 3];
      std::erase_if(recent_blips, [f](const auto& r) { return std::get<2>(r) + kBlipIsolationFrames < f; });
      for (int attempt = 0; attempt < 20; ++attempt) {
        const double w = 30 + 70 * unit(rng);
        const double h = 30 + 70 * unit(rng);
        b.box = {unit(rng) * (spec.width - w), unit(rng) * (spec.height - h), w, h};
        const bool clear = std::none_of(recent_blips.begin(), recent_blips.end(), [&b](const auto& r) {
          return std::get<0>(r) == b.cls && iou(std::get<1>(r), b.box) > 0;
        });
        if (clear) break;
      }
      recent_blips.emplace_back(b.cls, b.box, f);
      b.confidence = 0.3 + 0.4 * unit(rng);
      b.frames_left = 1 + static_cast<int>(unit(rng) * spec.noise.max_blip_frames) % spec.noise.max_blip_frames;
      blips.push_back(b);
    }
    for (auto& b : blips) {
      out.detections.push_back({f, b.cls, b.box, b.confidence, {}});
      out.detection_object.push_back(-1);
      --b.frames_left;
    }
    std::erase_if(blips, [](const Blip& b) { return b.frames_left <= 0; });

    if (auto frac = lane_fraction_at(spec, ego)) {
      out.lane_truth[static_cast<std::size_t>(f)] = *frac;
      double measured = *frac;
      if (noisy && spec.noise.lane_fraction_sigma > 0) {
        measured = std::clamp(measured + spec.noise.lane_fraction_sigma * gauss(rng), 0.0, 1.0);
      }
      DetectionRecord lane;
      lane.frame = f;
      lane.cls = ObjectClass::LaneMarking;
      lane.box = {0, spec.height / 2.0, static_cast<double>(spec.width), spec.height / 2.0};
      lane.confidence = 1.0;
      lane.attrs.lane_fraction = measured;
      out.detections.push_back(lane);
      out.detection_object.push_back(-1);
    }
  }

  // GPS at 1 Hz, covering the last frame.
  const auto last_second = static_cast<int>(std::ceil(static_cast<double>(frame_count - 1) / spec.fps - 1e-12));
  for (int s = 0; s <= last_second; ++s) {
    const double ego = std::min(spec.ego_speed * s, out.route_length_m);
    const GeoPoint p = point_along(spec.waypoints, ego);
    out.gps.push_back({static_cast<double>(s), p.lat, p.lon});
  }

  // Per-second condition annotations.
  std::map<std::int64_t, std::set<int>> potholes_per_second;
  for (const auto& o : out.observations) {
    if (o.cls == ObjectClass::Pothole) {
      potholes_per_second[static_cast<std::int64_t>(std::floor(static_cast<double>(o.frame) / spec.fps))].insert(
          o.object_id);
    }
  }
  const auto seconds = static_cast<std::int64_t>(std::floor(static_cast<double>(frame_count - 1) / spec.fps));
  for (std::int64_t s = 0; s <= seconds; ++s) {
    const auto region = condition_at(spec, std::min(spec.ego_speed * static_cast<double>(s), out.route_length_m));
    ConditionAnnotation a;
    a.second = s;
    a.lanes = region.lanes;
    a.vehicles = region.vehicles;
    a.bridge = region.bridge;
    auto it = potholes_per_second.find(s);
    a.potholes = it == potholes_per_second.end() ? 0 : static_cast<int>(it->second.size());
    a.capture_hour = static_cast<int>((spec.start_hour + s / 3600) % 24);
    out.conditions.push_back(a);
  }
  return out;
}

void save_video_meta(const VideoMeta& meta, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["sequence_id"] = meta.sequence_id;
  j["fps"] = meta.fps;
  j["frame_count"] = meta.frame_count;
  j["width"] = meta.width;
  j["height"] = meta.height;
  j["start_time"] = meta.start_time;
  std::ofstream f(path);
  if (!f) throw IngestError("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

VideoMeta load_video_meta(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IngestError("cannot read " + path.string());
  VideoMeta meta;
  try {
    const auto j = nlohmann::json::parse(f);
    meta.sequence_id = j.value("sequence_id", meta.sequence_id);
    meta.fps = j.value("fps", meta.fps);
    meta.frame_count = j.value("frame_count", meta.frame_count);
    meta.width = j.value("width", meta.width);
    meta.height = j.value("height", meta.height);
    meta.start_time = j.value("start_time", meta.start_time);
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(path.string() + ": " + e.what());
  }
  meta.validate();
  return meta;
}

void write_scenario(const ScenarioOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw IngestError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("detections.log");
    f << "# frame class x y w h confidence [key=value ...]\n";
    emit_detection_log(f, out.detections);
  }
  {
    auto f = open("gps.log");
    emit_gps_log(f, out.gps);
  }
  {
    auto f = open("conditions.txt");
    emit_condition_file(f, out.conditions);
  }
  {
    auto f = open("ground_truth.txt");
    const auto boxes = out.ground_truth_boxes();
    emit_ground_truth(f, boxes);
  }
  {
    auto f = open("objects.txt");
    f << "# id class offset_m lateral_m lat lon attribute group\n";
    for (const auto& o : out.objects) {
      std::string attr = "-";
      if (o.sign_state) attr = std::string(to_string(*o.sign_state));
      if (o.helmet_state) attr = std::string(to_string(*o.helmet_state));
      if (o.cls == ObjectClass::Motorcycle && !o.plate.empty()) attr = o.plate;
      f << o.id << ' ' << to_string(o.cls) << ' ' << format_double(o.offset_m) << ' ' << format_double(o.lateral_m)
        << ' ' << format_double(o.position.lat) << ' ' << format_double(o.position.lon) << ' ' << attr << ' '
        << o.group << '\n';
    }
  }
  save_video_meta(out.meta, dir / "meta.json");
}

namespace {

struct OracleCounts {
  std::vector<double> visibility;
  long long signs = 0, defective = 0;
  std::optional<double> light_gap;
  double route_length = 0;
  long long lane_classified = 0, lane_bad = 0;
  long long pothole_stretches = 0, pothole_with = 0;
  long long riders = 0, no_helmet = 0;
};

OracleCounts oracle_sequence(const ScenarioSpec& spec, const MetricsConfig& cfg) {
  ScenarioSpec quiet = spec;
  quiet.noise = NoiseModel{};
  quiet.noise.seed = spec.noise.seed;
  const ScenarioOutput gt = generate(quiet);
  OracleCounts c;

  std::map<int, std::pair<FrameIndex, FrameIndex>> seen;  // object -> first/last visible frame
  for (const auto& o : gt.observations) {
    auto [it, inserted] = seen.try_emplace(o.object_id, o.frame, o.frame);
    if (!inserted) it->second.second = o.frame;
  }

  std::vector<double> light_offsets;
  std::vector<double> pothole_offsets;
  for (const auto& obj : gt.objects) {
    auto vis = seen.find(obj.id);
    if (vis == seen.end()) continue;
    switch (obj.cls) {
      case ObjectClass::TrafficSign:
        ++c.signs;
        if (obj.sign_state == SignState::Defective) ++c.defective;
        c.visibility.push_back(gt.ego_offset[static_cast<std::size_t>(vis->second.second)] -
                               gt.ego_offset[static_cast<std::size_t>(vis->second.first)]);
        break;
      case ObjectClass::StreetLight:
        light_offsets.push_back(obj.offset_m);
        break;
      case ObjectClass::Pothole:
        pothole_offsets.push_back(obj.offset_m);
        break;
      case ObjectClass::Rider:
        ++c.riders;
        if (obj.helmet_state == HelmetState::NoHelmet) ++c.no_helmet;
        break;
      default:
        break;
    }
  }

  std::sort(light_offsets.begin(), light_offsets.end());
  if (light_offsets.size() >= 2) {
    c.light_gap = (light_offsets.back() - light_offsets.front()) / static_cast<double>(light_offsets.size() - 1);
  }

  const double total = gt.ego_offset.back();
  c.route_length = total;
  auto stretches = [total](double len) { return std::max<long long>(1, static_cast<long long>(std::ceil(total / len))); };
  auto index_of = [](double offset, double len, long long n) {
    return std::min(static_cast<long long>(std::floor(offset / len)), n - 1);
  };

  const long long n_lane = stretches(cfg.lane_stretch_m);
  std::vector<double> sum(static_cast<std::size_t>(n_lane), 0.0);
  std::vector<int> frames(static_cast<std::size_t>(n_lane), 0);
  for (std::size_t f = 0; f < gt.ego_offset.size(); ++f) {
    if (!gt.lane_truth[f]) continue;
    const auto k = static_cast<std::size_t>(index_of(gt.ego_offset[f], cfg.lane_stretch_m, n_lane));
    sum[k] += *gt.lane_truth[f];
    ++frames[k];
  }
  for (std::size_t k = 0; k < sum.size(); ++k) {
    if (frames[k] == 0) continue;
    ++c.lane_classified;
    if (sum[k] / frames[k] < cfg.lane_fair_min) ++c.lane_bad;
  }

  const long long n_pot = stretches(cfg.pothole_stretch_m);
  std::set<long long> with;
  for (double o : pothole_offsets) with.insert(index_of(o, cfg.pothole_stretch_m, n_pot));
  c.pothole_stretches = n_pot;
  c.pothole_with = static_cast<long long>(with.size());
  return c;
}

}  // namespace

SafetyReport oracle_metrics(const ScenarioSpec& spec, const MetricsConfig& config) {
  return oracle_metrics(std::vector<ScenarioSpec>{spec}, config);
}

SafetyReport oracle_metrics(const std::vector<ScenarioSpec>& city, const MetricsConfig& config) {
  OracleCounts total;
  double vis_sum = 0;
  long long vis_n = 0;
  double gap_weighted = 0, gap_weight = 0;
  for (const auto& spec : city) {
    const auto c = oracle_sequence(spec, config);
    for (double v : c.visibility) {
      vis_sum += v;
      ++vis_n;
    }
    total.signs += c.signs;
    total.defective += c.defective;
    if (c.light_gap) {
      gap_weighted += c.route_length * *c.light_gap;
      gap_weight += c.route_length;
    }
    total.lane_classified += c.lane_classified;
    total.lane_bad += c.lane_bad;
    total.pothole_stretches += c.pothole_stretches;
    total.pothole_with += c.pothole_with;
    total.riders += c.riders;
    total.no_helmet += c.no_helmet;
  }
  auto pct = [](long long a, long long b) -> std::optional<double> {
    if (b <= 0) return std::nullopt;
    return 100.0 * static_cast<double>(a) / static_cast<double>(b);
  };
  SafetyReport r;
  if (vis_n > 0) r.sign_visibility_mean = vis_sum / static_cast<double>(vis_n);
  r.defective_sign_pct = pct(total.defective, total.signs);
  if (gap_weight > 0) r.streetlight_gap_mean = gap_weighted / gap_weight;
  r.lane_no_marking_pct = pct(total.lane_bad, total.lane_classified);
  r.pothole_stretch_pct = pct(total.pothole_with, total.pothole_stretches);
  r.helmet_violation_pct = pct(total.no_helmet, total.riders);
  return r;
}

std::vector<ScenarioSpec> reference_city(std::uint64_t seed) {
  constexpr double kLength = 2460;
  constexpr int kRiders = 1000;
  constexpr int kViolators = 459;
  constexpr int kRowsA = 84;  // sequence B takes the remaining riders
  constexpr double kRowSpacing = 22;
  const double slots[] = {-5.0, -3.0, -1.0, 1.0, 3.0, 5.0};

  std::vector<bool> helmets(kRiders, true);
  std::fill(helmets.begin(), helmets.begin() + kViolators, false);
  std::mt19937_64 rng(seed);
  std::shuffle(helmets.begin(), helmets.end(), rng);

  std::vector<ScenarioSpec> city(2);
  const GeoPoint origins[] = {{17.3850, 78.4867}, {17.4400, 78.3489}};
  int rider = 0;
  int plate = 1000;
  for (std::size_t s = 0; s < city.size(); ++s) {
    auto& spec = city[s];
    spec.sequence_id = s == 0 ? "city-a" : "city-b";
    spec.waypoints = straight_route(origins[s], kLength);
    spec.start_hour = s == 0 ? 9 : 17;
    spec.noise.seed = seed + s;
    spec.streetlight_offsets = regular_offsets(100, 165, kLength);
    const int end = s == 0 ? kRowsA * 6 : kRiders;
    for (int k = 0; rider < end; ++k) {
      RiderGroupPlacement g;
      g.offset_m = 60 + kRowSpacing * (k / 6);
      g.lateral_m = slots[k % 6];
      g.helmets = {helmets[static_cast<std::size_t>(rider++)]};
      g.plate = "TS09EA" + std::to_string(plate++);
      spec.rider_groups.push_back(std::move(g));
    }
  }

  city[0].signs = {{300, true}, {800, false}, {1300, true}, {1800, false}};
  city[1].signs = {{400, false}, {900, true}, {1400, false}, {1900, false}};

  city[0].potholes = {{1015, -1.5}, {1030, 1.5}, {1045, -1.5}, {1060, 1.5}, {1075, -1.5}};
  city[1].potholes = {{1720, -1.5}, {1740, 1.5}, {1760, -1.5}};

  city[0].lane_profile = {{0, 1000, 0.5}, {1000, 1500, 0.1}, {1500, kLength + 1, 0.0}};
  city[1].lane_profile = {{0, 1000, 0.5}, {1000, 1800, 0.0}, {1800, kLength + 1, 0.1}};

  city[0].conditions = {{0, 2, 3, false}, {800, 1, 6, false}, {1600, 4, 10, false}, {2200, 2, 5, true}};
  city[1].conditions = {{0, 3, 2, false}, {1200, 4, 12, false}};
  return city;
}

}  // namespace roadsafe
