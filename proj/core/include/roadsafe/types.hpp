#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace roadsafe {

using FrameIndex = std::int64_t;

// Detector output classes. `LaneMarking` carries the lane segmenter's
// per-frame marking fraction; it is never tracked.
enum class ObjectClass : std::uint8_t {
  StreetLight,
  TrafficSign,
  Pothole,
  Rider,
  Motorcycle,
  Helmet,
  LicensePlate,
  LaneMarking,
};

inline constexpr ObjectClass kAllClasses[] = {
    ObjectClass::StreetLight, ObjectClass::TrafficSign, ObjectClass::Pothole,
    ObjectClass::Rider,       ObjectClass::Motorcycle,  ObjectClass::Helmet,
    ObjectClass::LicensePlate, ObjectClass::LaneMarking,
};

std::string_view to_string(ObjectClass c);
std::optional<ObjectClass> parse_object_class(std::string_view s);

enum class SignState : std::uint8_t { Normal, Defective };
enum class HelmetState : std::uint8_t { Helmet, NoHelmet };

std::string_view to_string(SignState s);
std::string_view to_string(HelmetState s);
std::optional<SignState> parse_sign_state(std::string_view s);
std::optional<HelmetState> parse_helmet_state(std::string_view s);

// Axis-aligned pixel rectangle, top-left anchored.
struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double center_x() const { return x + w / 2; }
  double center_y() const { return y + h / 2; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct DetectionAttrs {
  std::optional<SignState> sign_state;
  std::optional<HelmetState> helmet_state;
  std::optional<std::string> plate_text;
  std::optional<double> lane_fraction;

  friend bool operator==(const DetectionAttrs&, const DetectionAttrs&) = default;
};

struct DetectionRecord {
  FrameIndex frame = 0;
  ObjectClass cls = ObjectClass::Pothole;
  BoundingBox box;
  double confidence = 0;
  DetectionAttrs attrs;

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

struct VideoMeta {
  std::string sequence_id = "seq";
  double fps = 15.0;
  FrameIndex frame_count = 0;
  int width = 1920;
  int height = 1080;
  std::string start_time;  // ISO-8601 wall clock, informational

  // Throws InvalidArgument when fps, frame_count or dimensions are invalid.
  void validate() const;
};

struct GeoPoint {
  double lat = 0;
  double lon = 0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct GeoSample {
  double t = 0;  // seconds since sequence start
  double lat = 0;
  double lon = 0;

  GeoPoint point() const { return {lat, lon}; }
  friend bool operator==(const GeoSample&, const GeoSample&) = default;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace roadsafe
