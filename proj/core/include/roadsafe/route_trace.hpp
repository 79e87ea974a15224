#pragma once

#include <optional>
#include <span>
#include <vector>

#include "roadsafe/types.hpp"

namespace roadsafe {

// Piecewise-linear interpolation of lat and lon in t at time frame / fps.
// Throws InvalidArgument for fewer than two samples and OutOfRangeError when
// the time falls outside [first.t, last.t].
GeoPoint interpolate_position(std::span<const GeoSample> trace, FrameIndex frame, double fps);
GeoPoint interpolate_at(std::span<const GeoSample> trace, double t);

// A GPS trace split into contiguous segments wherever consecutive samples
// are more than `max_gap_s` apart. Times inside a gap have no position.
class RouteTrace {
 public:
  static constexpr double kDefaultMaxGap = 5.0;

  RouteTrace() = default;
  explicit RouteTrace(std::vector<GeoSample> samples, double max_gap_s = kDefaultMaxGap);

  std::optional<GeoPoint> position_at(double t) const;
  std::optional<GeoPoint> position_at_frame(FrameIndex frame, double fps) const;

  std::span<const GeoSample> samples() const { return samples_; }
  std::size_t segment_count() const { return segments_.size(); }
  bool empty() const { return samples_.empty(); }

 private:
  struct Segment {
    std::size_t begin;  // sample index range [begin, end)
    std::size_t end;
  };
  std::vector<GeoSample> samples_;
  std::vector<Segment> segments_;
};

}  // namespace roadsafe
