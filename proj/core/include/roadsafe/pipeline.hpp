#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsafe/config.hpp"
#include "roadsafe/fusion.hpp"
#include "roadsafe/ingest.hpp"
#include "roadsafe/metrics.hpp"
#include "roadsafe/report.hpp"

namespace roadsafe {

struct SequenceInput {
  VideoMeta meta;
  std::vector<DetectionRecord> detections;  // frame-sorted
  std::vector<GeoSample> gps;
  std::vector<Diagnostic> diagnostics;      // from parsing, if loaded from disk
};

// Reads meta.json, detections.log and gps.log from a sequence directory.
// Malformed or rejected lines are kept as diagnostics; a missing file
// throws IngestError.
SequenceInput load_sequence(const std::filesystem::path& dir);

enum class IrregularityType : std::uint8_t {
  Pothole,
  MissingStreetLight,
  DefectiveSign,
  HelmetViolation,
  LaneMarkingAbsence,
};

inline constexpr IrregularityType kAllIrregularityTypes[] = {
    IrregularityType::Pothole, IrregularityType::MissingStreetLight, IrregularityType::DefectiveSign,
    IrregularityType::HelmetViolation, IrregularityType::LaneMarkingAbsence,
};

std::string_view to_string(IrregularityType t);
std::optional<IrregularityType> parse_irregularity_type(std::string_view s);

struct Irregularity {
  std::string id;  // "<sequence>:<type>:<n>", stable for a given input
  IrregularityType type = IrregularityType::Pothole;
  std::string sequence_id;
  GeoPoint position;
  double route_offset = 0;
  std::string severity;  // low, medium or high
  std::optional<std::int64_t> track_id;  // group id for helmet violations
  std::optional<FrameIndex> anchor_frame;
  std::string detail;    // fused attribute, plate or stretch class
  std::vector<FrameIndex> evidence;
  std::string created_at;  // set when persisted
};

struct SequenceResult {
  std::string sequence_id;
  std::vector<Track> tracks;  // every track, including unconfirmed ones
  std::vector<FusedTrack> fused;  // confirmed tracks that passed the length filter
  std::vector<RiderGroup> groups;
  std::vector<GeoTaggedObject> geotags;
  std::vector<Stretch> lane_stretches;
  std::vector<Stretch> pothole_stretches;
  SequenceMetrics metrics;
  std::vector<Irregularity> irregularities;
};

// Tracking, fusion, geo-tagging and per-sequence measures for one sequence.
SequenceResult run_sequence(const SequenceInput& input, const PipelineConfig& config = {});

// GeoJSON FeatureCollection of point features.
std::string irregularities_to_geojson(std::span<const Irregularity> items);
std::vector<Irregularity> irregularities_from_geojson(std::string_view text);

// Per-sequence measures as JSON, so `report` can pool earlier `fuse` runs.
std::string sequence_metrics_to_json(const SequenceMetrics& m);
SequenceMetrics sequence_metrics_from_json(std::string_view text);

}  // namespace roadsafe
