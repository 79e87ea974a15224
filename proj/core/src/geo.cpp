#include "roadsafe/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace roadsafe {

double haversine(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kDeg;
  const double dlon = (b.lon - a.lon) * kDeg;
  const double s1 = std::sin(dlat / 2);
  const double s2 = std::sin(dlon / 2);
  const double h = s1 * s1 + std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * s2 * s2;
  return 2 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

RouteFrames::RouteFrames(const RouteTrace& trace, double fps, FrameIndex frame_count)
    : positions_(static_cast<std::size_t>(std::max<FrameIndex>(frame_count, 0))),
      offsets_(positions_.size(), 0.0) {
  std::optional<GeoPoint> prev;
  FrameIndex prev_frame = -2;
  double acc = 0;
  for (FrameIndex f = 0; f < frame_count; ++f) {
    auto p = trace.position_at_frame(f, fps);
    positions_[static_cast<std::size_t>(f)] = p;
    if (p) {
      if (prev && prev_frame == f - 1) acc += haversine(*prev, *p);
      prev = p;
      prev_frame = f;
      any_ = true;
    }
    offsets_[static_cast<std::size_t>(f)] = acc;
  }
  total_ = acc;
}

bool RouteFrames::positioned(FrameIndex f) const {
  return f >= 0 && f < frame_count() && positions_[static_cast<std::size_t>(f)].has_value();
}

std::optional<GeoPoint> RouteFrames::position(FrameIndex f) const {
  if (!positioned(f)) return std::nullopt;
  return positions_[static_cast<std::size_t>(f)];
}

std::optional<double> RouteFrames::offset(FrameIndex f) const {
  if (!positioned(f)) return std::nullopt;
  return offsets_[static_cast<std::size_t>(f)];
}

std::optional<GeoPoint> RouteFrames::position_at_offset(double offset_m) const {
  std::optional<std::size_t> before;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!positions_[i]) continue;
    if (offsets_[i] >= offset_m) {
      if (!before || offsets_[i] == offsets_[*before]) return positions_[i];
      const double a = (offset_m - offsets_[*before]) / (offsets_[i] - offsets_[*before]);
      const GeoPoint& p = *positions_[*before];
      const GeoPoint& q = *positions_[i];
      return GeoPoint{p.lat + a * (q.lat - p.lat), p.lon + a * (q.lon - p.lon)};
    }
    before = i;
  }
  if (before) return positions_[*before];
  return std::nullopt;
}

std::vector<std::optional<double>> route_offsets(const RouteTrace& trace, double fps, FrameIndex frame_count) {
  RouteFrames frames(trace, fps, frame_count);
  std::vector<std::optional<double>> out(static_cast<std::size_t>(std::max<FrameIndex>(frame_count, 0)));
  for (FrameIndex f = 0; f < frame_count; ++f) out[static_cast<std::size_t>(f)] = frames.offset(f);
  return out;
}

}  // namespace roadsafe
