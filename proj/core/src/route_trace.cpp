#include "roadsafe/route_trace.hpp"

#include <algorithm>

#include "roadsafe/error.hpp"

namespace roadsafe {
namespace {

GeoPoint lerp(const GeoSample& a, const GeoSample& b, double t) {
  if (t == a.t) return a.point();
  if (t == b.t) return b.point();
  const double alpha = (t - a.t) / (b.t - a.t);
  return {a.lat + alpha * (b.lat - a.lat), a.lon + alpha * (b.lon - a.lon)};
}

}  // namespace

GeoPoint interpolate_at(std::span<const GeoSample> trace, double t) {
  if (trace.size() < 2) throw InvalidArgument("interpolation needs at least two GPS samples");
  if (!(t >= trace.front().t && t <= trace.back().t)) {
    throw OutOfRangeError("time " + format_double(t) + " s outside GPS trace span");
  }
  // First sample with sample.t > t; t lies in [hi-1, hi].
  auto hi = std::upper_bound(trace.begin(), trace.end(), t,
                             [](double value, const GeoSample& s) { return value < s.t; });
  if (hi == trace.end()) return trace.back().point();
  return lerp(*(hi - 1), *hi, t);
}

GeoPoint interpolate_position(std::span<const GeoSample> trace, FrameIndex frame, double fps) {
  if (!(fps > 0)) throw InvalidArgument("fps must be positive");
  return interpolate_at(trace, static_cast<double>(frame) / fps);
}

RouteTrace::RouteTrace(std::vector<GeoSample> samples, double max_gap_s) : samples_(std::move(samples)) {
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) throw InvalidArgument("GPS samples must strictly increase in t");
  }
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= samples_.size(); ++i) {
    if (i == samples_.size() || samples_[i].t - samples_[i - 1].t > max_gap_s) {
      if (i > begin) segments_.push_back({begin, i});
      begin = i;
    }
  }
}

std::optional<GeoPoint> RouteTrace::position_at(double t) const {
  for (const auto& seg : segments_) {
    const auto& first = samples_[seg.begin];
    const auto& last = samples_[seg.end - 1];
    if (t < first.t || t > last.t) continue;
    if (seg.end - seg.begin == 1) return first.point();
    return interpolate_at(std::span(samples_).subspan(seg.begin, seg.end - seg.begin), t);
  }
  return std::nullopt;
}

std::optional<GeoPoint> RouteTrace::position_at_frame(FrameIndex frame, double fps) const {
  return position_at(static_cast<double>(frame) / fps);
}

}  // namespace roadsafe
