#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "roadsafe/evaluation.hpp"
#include "roadsafe/ingest.hpp"
#include "roadsafe/report.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

struct NoiseModel {
  double miss_rate = 0;             // per object and frame
  int max_consecutive_misses = -1;  // cap on a miss streak; negative = none
  double false_positive_rate = 0;   // probability per frame of starting a spurious blip
  int max_blip_frames = 3;
  double box_jitter_px = 0;         // Gaussian sigma on x, y, w, h
  double attribute_flip_prob = 0;
  double lane_fraction_sigma = 0;
  std::uint64_t seed = 1;
};

// Pinhole camera on the ego vehicle looking along the route.
struct CameraModel {
  double focal_px = 1000;
  double height_m = 1.5;
  double min_distance_m = 9;  // closer objects are cut off by the hood and the frame edges
};

struct SignPlacement {
  double offset_m = 0;
  bool defective = false;
  double lateral_m = 4.5;
};

struct PotholePlacement {
  double offset_m = 0;
  double lateral_m = 0;
};

struct RiderGroupPlacement {
  double offset_m = 0;
  double lateral_m = 0;
  std::vector<bool> helmets;  // one entry per rider (1 or 2)
  std::string plate;          // empty: unreadable
};

struct LaneRegion {
  double start_m = 0;
  double end_m = 0;
  double fraction = 0;
};

struct ConditionRegion {
  double start_m = 0;
  int lanes = 2;
  int vehicles = 2;
  bool bridge = false;
};

struct ScenarioSpec {
  std::string sequence_id = "sim";
  std::vector<GeoPoint> waypoints;
  double ego_speed = 5;  // m/s, dense urban traffic
  double fps = 15;
  int width = 1920;
  int height = 1080;
  int start_hour = 9;
  CameraModel camera;

  std::vector<double> streetlight_offsets;
  double streetlight_lateral_m = -6;
  std::vector<SignPlacement> signs;
  std::vector<PotholePlacement> potholes;
  std::vector<RiderGroupPlacement> rider_groups;
  std::vector<LaneRegion> lane_profile;  // frames outside every region emit no lane record
  std::vector<ConditionRegion> conditions;
  NoiseModel noise;

  // Throws InvalidArgument for fewer than two waypoints, non-positive speed
  // or fps, or probabilities outside [0,1].
  void validate() const;
};

// Lights every `spacing` meters from `first` up to the route end.
std::vector<double> regular_offsets(double first, double spacing, double route_length);

// Length of the polyline through the waypoints.
double route_length(const std::vector<GeoPoint>& waypoints);
// Point at a distance along the waypoint polyline (clamped to its ends).
GeoPoint point_along(const std::vector<GeoPoint>& waypoints, double offset_m);
// Waypoints `length_m` due east of `origin` at the given latitude.
std::vector<GeoPoint> straight_route(GeoPoint origin, double length_m);

struct GroundTruthObject {
  int id = 0;
  ObjectClass cls = ObjectClass::Pothole;
  double offset_m = 0;
  double lateral_m = 0;
  GeoPoint position;
  std::optional<SignState> sign_state;
  std::optional<HelmetState> helmet_state;
  std::string plate;
  int group = -1;  // rider group index for riders, motorcycles and helmets
};

struct GroundTruthObservation {
  FrameIndex frame = 0;
  int object_id = 0;
  ObjectClass cls = ObjectClass::Pothole;
  BoundingBox box;  // noiseless
};

struct ScenarioOutput {
  VideoMeta meta;
  double route_length_m = 0;
  std::vector<double> ego_offset;             // per frame, exact
  std::vector<DetectionRecord> detections;    // frame-sorted
  std::vector<int> detection_object;          // parallel to detections; -1 for blips and lane records
  std::vector<GeoSample> gps;
  std::vector<ConditionAnnotation> conditions;
  std::vector<GroundTruthObject> objects;
  std::vector<GroundTruthObservation> observations;  // every visible object box, frame-sorted
  std::vector<std::optional<double>> lane_truth;     // per frame

  // Ground-truth boxes for detection evaluation.
  std::vector<GroundTruthBox> ground_truth_boxes() const;
};

// Drives the ego along the route at constant speed, projects every object
// within its visibility radius into the image (box area grows strictly as
// the object gets closer), then applies the noise model.
ScenarioOutput generate(const ScenarioSpec& spec);

// Writes detections.log, gps.log, conditions.txt, ground_truth.txt,
// objects.txt and meta.json into `dir` (created if missing).
void write_scenario(const ScenarioOutput& out, const std::filesystem::path& dir);

// Safety measures computed from ground truth only, with the same stretch
// lengths and class thresholds as the pipeline.
SafetyReport oracle_metrics(const ScenarioSpec& spec, const MetricsConfig& config = {});
SafetyReport oracle_metrics(const std::vector<ScenarioSpec>& city, const MetricsConfig& config = {});

// A two-sequence city parameterised with light spacing 165 m, 3 of 8 signs
// defective, 459 of 1000 riders without helmet and potholes in 2 of 50
// pothole stretches.
std::vector<ScenarioSpec> reference_city(std::uint64_t seed = 7);

VideoMeta load_video_meta(const std::filesystem::path& path);
void save_video_meta(const VideoMeta& meta, const std::filesystem::path& path);

}  // namespace roadsafe
