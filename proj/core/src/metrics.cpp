#include "roadsafe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "roadsafe/error.hpp"

namespace roadsafe {
namespace {
constexpr double kPolylineStepM = 5.0;
}  // namespace

void MetricsConfig::validate() const {
  if (!(lane_stretch_m > 0) || !(pothole_stretch_m > 0)) throw InvalidArgument("stretch lengths must be positive");
  if (!(lane_faded_min >= 0 && lane_faded_min <= lane_fair_min && lane_fair_min <= 1)) {
    throw InvalidArgument("lane thresholds must satisfy 0 <= faded <= fair <= 1");
  }
  if (pothole_fair_max < 0 || pothole_average_max < pothole_fair_max) {
    throw InvalidArgument("pothole thresholds must satisfy 0 <= fair_max <= average_max");
  }
  if (!(streetlight_gap_alert_m > 0)) throw InvalidArgument("streetlight_gap_alert_m must be positive");
}

std::optional<double> visibility_range(const Track& track, const RouteFrames& route) {
  auto first = route.offset(track.first_frame);
  auto last = route.offset(track.last_frame);
  if (!first || !last) return std::nullopt;
  return std::max(0.0, *last - *first);
}

std::optional<GeoTaggedObject> geotag(const FusedTrack& fused, const RouteFrames& route,
                                      std::string_view sequence_id) {
  const DetectionRecord* anchor = nullptr;
  for (const auto& d : fused.track.history) {
    if (!route.positioned(d.frame)) continue;
    if (anchor == nullptr || d.box.area() > anchor->box.area()) anchor = &d;
  }
  if (anchor == nullptr) return std::nullopt;

  GeoTaggedObject g;
  g.object_type = fused.track.cls;
  g.track_id = fused.track.id;
  g.position = *route.position(anchor->frame);
  g.route_offset = *route.offset(anchor->frame);
  g.anchor_frame = anchor->frame;
  g.sequence_id = std::string(sequence_id);
  g.fused_attr = fused.fused_attr;
  g.evidence.reserve(fused.track.history.size());
  for (const auto& d : fused.track.history) g.evidence.push_back(d.frame);
  return g;
}

std::optional<double> streetlight_spacing(std::span<const double> light_offsets) {
  if (light_offsets.size() < 2) return std::nullopt;
  std::vector<double> sorted(light_offsets.begin(), light_offsets.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i) sum += sorted[i] - sorted[i - 1];
  return sum / static_cast<double>(sorted.size() - 1);
}

std::size_t stretch_index(double offset_m, double length_m, std::size_t stretch_count) {
  if (stretch_count == 0) return 0;
  const double k = std::floor(std::max(0.0, offset_m) / length_m);
  return std::min(static_cast<std::size_t>(k), stretch_count - 1);
}

std::vector<Stretch> partition_route(const RouteFrames& route, double length_m, StretchKind kind,
                                     std::string_view sequence_id) {
  std::vector<Stretch> out;
  if (!route.any_positioned()) return out;
  const double total = route.total_length();
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total / length_m)));
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Stretch s;
    s.sequence_id = std::string(sequence_id);
    s.kind = kind;
    s.start_m = static_cast<double>(k) * length_m;
    s.end_m = k + 1 == count ? total : static_cast<double>(k + 1) * length_m;
    out.push_back(std::move(s));
  }

  // Polylines: positioned frames thinned to one vertex every few meters.
  for (FrameIndex f = 0; f < route.frame_count(); ++f) {
    auto o = route.offset(f);
    if (!o) continue;
    auto& s = out[stretch_index(*o, length_m, count)];
    const GeoPoint p = *route.position(f);
    if (s.polyline.empty() || haversine(s.polyline.back(), p) >= kPolylineStepM) s.polyline.push_back(p);
  }
  for (std::size_t k = 0; k + 1 < count; ++k) {
    // Close each polyline at the start of its successor.
    if (auto p = route.position_at_offset(out[k].end_m)) out[k].polyline.push_back(*p);
  }
  return out;
}

std::string classify_lane_score(double score, const MetricsConfig& config) {
  if (score >= config.lane_fair_min) return "fair";
  if (score >= config.lane_faded_min) return "faded";
  return "absent";
}

std::string classify_pothole_count(int count, const MetricsConfig& config) {
  if (count <= config.pothole_fair_max) return "fair";
  if (count <= config.pothole_average_max) return "average";
  return "poor";
}

std::vector<Stretch> lane_stretches(std::span<const std::optional<double>> lane_fraction, const RouteFrames& route,
                                    const MetricsConfig& config, std::string_view sequence_id) {
  auto stretches = partition_route(route, config.lane_stretch_m, StretchKind::Lane, sequence_id);
  std::vector<double> sums(stretches.size(), 0.0);
  for (FrameIndex f = 0; f < route.frame_count() && static_cast<std::size_t>(f) < lane_fraction.size(); ++f) {
    const auto& frac = lane_fraction[static_cast<std::size_t>(f)];
    auto o = route.offset(f);
    if (!frac || !o) continue;
    const auto k = stretch_index(*o, config.lane_stretch_m, stretches.size());
    sums[k] += *frac;
    ++stretches[k].count;
  }
  for (std::size_t k = 0; k < stretches.size(); ++k) {
    auto& s = stretches[k];
    if (s.count == 0) {
      s.label = "unclassified";
      continue;
    }
    s.score = sums[k] / s.count;
    s.label = classify_lane_score(*s.score, config);
  }
  return stretches;
}

PotholeStretches pothole_stretches(std::span<const GeoTaggedObject> potholes, const RouteFrames& route,
                                   const MetricsConfig& config, std::string_view sequence_id) {
  PotholeStretches out;
  out.stretches = partition_route(route, config.pothole_stretch_m, StretchKind::Pothole, sequence_id);
  if (out.stretches.empty()) return out;
  for (const auto& p : potholes) {
    ++out.stretches[stretch_index(p.route_offset, config.pothole_stretch_m, out.stretches.size())].count;
  }
  int with = 0;
  for (auto& s : out.stretches) {
    s.label = classify_pothole_count(s.count, config);
    if (s.count >= 1) ++with;
  }
  out.pct_with_potholes = 100.0 * with / static_cast<double>(out.stretches.size());
  return out;
}

void emit_stretches(std::ostream& out, std::span<const Stretch> stretches) {
  out << "sequence,start_m,end_m,score_or_count,class\n";
  for (const auto& s : stretches) {
    out << s.sequence_id << ',' << format_double(s.start_m) << ',' << format_double(s.end_m) << ',';
    if (s.kind == StretchKind::Lane) {
      out << (s.score ? format_double(*s.score) : std::string("NA"));
    } else {
      out << s.count;
    }
    out << ',' << s.label << '\n';
  }
}

}  // namespace roadsafe
