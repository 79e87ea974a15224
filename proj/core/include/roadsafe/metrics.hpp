#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsafe/fusion.hpp"
#include "roadsafe/geo.hpp"

namespace roadsafe {

struct MetricsConfig {
  double lane_stretch_m = 50.0;
  double pothole_stretch_m = 100.0;
  double lane_fair_min = 0.30;    // score >= this: fair
  double lane_faded_min = 0.05;   // score >= this: faded, below: absent
  int pothole_fair_max = 2;       // count <= this: fair
  int pothole_average_max = 4;    // count <= this: average, above: poor
  double streetlight_gap_alert_m = 100.0;  // gaps above this become irregularities

  void validate() const;
};

struct GeoTaggedObject {
  ObjectClass object_type = ObjectClass::Pothole;
  TrackId track_id = 0;
  GeoPoint position;
  double route_offset = 0;
  FrameIndex anchor_frame = 0;
  std::string sequence_id;
  std::optional<std::string> fused_attr;
  std::vector<FrameIndex> evidence;  // frames of the underlying track
};

// Ego path length between the track's first and last frames; nullopt if
// either endpoint has no position.
std::optional<double> visibility_range(const Track& track, const RouteFrames& route);

// Anchors the object at its closest approach: the positioned frame with
// the largest box area (earliest on ties). nullopt when no frame of the
// track has a position.
std::optional<GeoTaggedObject> geotag(const FusedTrack& track, const RouteFrames& route,
                                      std::string_view sequence_id);

// Mean gap between consecutive lights along the route, given their route
// offsets in any order. nullopt for fewer than two lights.
std::optional<double> streetlight_spacing(std::span<const double> light_offsets);

enum class StretchKind : std::uint8_t { Lane, Pothole };

struct Stretch {
  std::string sequence_id;
  StretchKind kind = StretchKind::Lane;
  double start_m = 0;
  double end_m = 0;
  std::optional<double> score;  // mean lane fraction (lane stretches)
  int count = 0;                // potholes (pothole stretches) or scored frames (lane stretches)
  std::string label;            // fair/faded/absent/unclassified or fair/average/poor
  std::vector<GeoPoint> polyline;

  double length() const { return end_m - start_m; }
};

// Partitions [0, total] into consecutive stretches of `length_m`; the last
// one holds the remainder. A route with positions but zero length yields a
// single empty stretch.
std::vector<Stretch> partition_route(const RouteFrames& route, double length_m, StretchKind kind,
                                     std::string_view sequence_id);

// Index of the stretch containing a route offset.
std::size_t stretch_index(double offset_m, double length_m, std::size_t stretch_count);

// 50 m stretches scored by the mean per-frame lane-marking fraction.
// `lane_fraction` is indexed by frame.
std::vector<Stretch> lane_stretches(std::span<const std::optional<double>> lane_fraction, const RouteFrames& route,
                                    const MetricsConfig& config, std::string_view sequence_id);

struct PotholeStretches {
  std::vector<Stretch> stretches;
  double pct_with_potholes = 0;  // 100 * stretches with count >= 1 / stretches
};

PotholeStretches pothole_stretches(std::span<const GeoTaggedObject> potholes, const RouteFrames& route,
                                   const MetricsConfig& config, std::string_view sequence_id);

std::string classify_lane_score(double score, const MetricsConfig& config);
std::string classify_pothole_count(int count, const MetricsConfig& config);

// CSV with header `sequence,start_m,end_m,score_or_count,class`.
void emit_stretches(std::ostream& out, std::span<const Stretch> stretches);

}  // namespace roadsafe
