#pragma once

#include <optional>
#include <vector>

#include "roadsafe/route_trace.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

inline constexpr double kEarthRadiusM = 6371000.0;

// Great-circle distance in meters.
double haversine(const GeoPoint& a, const GeoPoint& b);

// Ego position and cumulative path length for every frame of a sequence.
// Frames outside the trace or inside a GPS gap have neither position nor
// offset. Distance across a gap is not counted.
class RouteFrames {
 public:
  RouteFrames() = default;
  RouteFrames(const RouteTrace& trace, double fps, FrameIndex frame_count);

  FrameIndex frame_count() const { return static_cast<FrameIndex>(positions_.size()); }
  bool positioned(FrameIndex f) const;
  std::optional<GeoPoint> position(FrameIndex f) const;
  std::optional<double> offset(FrameIndex f) const;
  double total_length() const { return total_; }
  bool any_positioned() const { return any_; }

  // Position at a route offset, interpolated between the positioned frames
  // that bracket it.
  std::optional<GeoPoint> position_at_offset(double offset_m) const;

 private:
  std::vector<std::optional<GeoPoint>> positions_;
  std::vector<double> offsets_;
  double total_ = 0;
  bool any_ = false;
};

// Per-frame cumulative path length; nullopt for frames without position.
std::vector<std::optional<double>> route_offsets(const RouteTrace& trace, double fps, FrameIndex frame_count);

}  // namespace roadsafe
