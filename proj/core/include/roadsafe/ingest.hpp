#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsafe/types.hpp"

namespace roadsafe {

struct Diagnostic {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct DetectionLog {
  std::vector<DetectionRecord> records;  // nondecreasing frame order
  std::vector<Diagnostic> diagnostics;
  std::size_t malformed = 0;  // lines that do not parse
  std::size_t rejected = 0;   // lines that parse but violate record invariants
};

// Parses the line-delimited detection format:
//   frame class x y w h confidence [key=value ...]
// Keys: sign_state, helmet_state, plate, lane_fraction. Lines starting with
// '#' and blank lines are ignored. Throws IngestError if the stream is
// unreadable; bad lines are skipped and reported in the result.
DetectionLog parse_detection_log(std::istream& in, const VideoMeta& meta);

// Writes records in the same format. Parsing the output yields the input
// records bit-for-bit.
void emit_detection_log(std::ostream& out, std::span<const DetectionRecord> records);
std::string format_detection(const DetectionRecord& r);

struct GpsLog {
  std::vector<GeoSample> samples;  // strictly increasing t
  std::vector<Diagnostic> diagnostics;
};

// Lines `t lat lon`. Samples that are out of range or do not advance in
// time are rejected with a diagnostic.
GpsLog parse_gps_log(std::istream& in);
void emit_gps_log(std::ostream& out, std::span<const GeoSample> samples);

// ---- Condition annotations (one record per captured second) ----

struct ConditionAnnotation {
  std::int64_t second = 0;
  int lanes = 1;
  int vehicles = 0;
  int potholes = 0;
  bool bridge = false;
  int capture_hour = 12;

  friend bool operator==(const ConditionAnnotation&, const ConditionAnnotation&) = default;
};

enum class RoadType : std::uint8_t { Narrow, Standard, Highway, Bridge };
enum class TrafficDensity : std::uint8_t { Sparse, Moderate, Dense };
enum class RoadDamage : std::uint8_t { Low, Moderate, High };
enum class TimeOfDay : std::uint8_t { Morning, Noon, Evening, Unlabeled };

struct ConditionLabel {
  RoadType road_type = RoadType::Standard;
  TrafficDensity traffic = TrafficDensity::Sparse;
  RoadDamage damage = RoadDamage::Low;
  TimeOfDay time_of_day = TimeOfDay::Unlabeled;

  friend bool operator==(const ConditionLabel&, const ConditionLabel&) = default;
};

std::string_view to_string(RoadType v);
std::string_view to_string(TrafficDensity v);
std::string_view to_string(RoadDamage v);
std::string_view to_string(TimeOfDay v);

// Hierarchical condition label from per-second counts. Hours use half-open
// ranges [7,12) morning, [12,16) noon, [16,19) evening; the bridge flag
// overrides the lane count. Throws InvalidArgument for lanes < 1, negative
// counts or an hour outside [0,23].
ConditionLabel label_condition(const ConditionAnnotation& a);

struct ConditionLog {
  std::vector<ConditionAnnotation> annotations;
  std::vector<Diagnostic> diagnostics;
};

// Lines `second lanes vehicles potholes bridge hour`; bridge is 0/1.
ConditionLog parse_condition_file(std::istream& in);
void emit_condition_file(std::ostream& out, std::span<const ConditionAnnotation> annotations);

// Per-second labels, looked up by frame.
class ConditionTable {
 public:
  ConditionTable() = default;
  explicit ConditionTable(std::span<const ConditionAnnotation> annotations);

  std::optional<ConditionLabel> label_for_second(std::int64_t second) const;
  std::optional<ConditionLabel> label_for_frame(FrameIndex frame, double fps) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::map<std::int64_t, ConditionLabel> labels_;
};

}  // namespace roadsafe
