#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "roadsafe/kalman.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

using TrackId = std::int64_t;

enum class TrackStatus : std::uint8_t { Tentative, Confirmed, Dead };
std::string_view to_string(TrackStatus s);

struct TrackerConfig {
  double iou_threshold = 0.3;
  int min_hits = 3;
  int max_age = 5;  // frames without an update before a track dies
  KalmanModel kalman;

  // Throws InvalidArgument unless iou_threshold in (0,1), min_hits >= 1,
  // max_age >= 1 and the noise scales are positive.
  void validate() const;
};

struct Track {
  TrackId id = 0;
  ObjectClass cls = ObjectClass::Pothole;
  KalmanState state;
  FrameIndex first_frame = 0;
  FrameIndex last_frame = 0;  // last frame with an associated detection
  int hits = 0;
  int time_since_update = 0;
  TrackStatus status = TrackStatus::Tentative;
  std::optional<FrameIndex> confirmed_frame;
  std::vector<DetectionRecord> history;  // one associated detection per updated frame

  FrameIndex span() const { return last_frame - first_frame + 1; }
  bool ever_confirmed() const { return confirmed_frame.has_value(); }
  BoundingBox predicted_box() const { return state_to_box(state.mean); }
};

struct Association {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (track index, detection index)
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_detections;
};

// Hungarian assignment on 1 - IoU; pairs with IoU below the threshold are
// split back into unmatched tracks and detections. Outputs are sorted.
Association associate(std::span<const BoundingBox> tracks, std::span<const BoundingBox> detections,
                      double iou_threshold);

// SORT-style tracker for a single object class.
class SortTracker {
 public:
  // Ids are drawn from `id_source` when given, so that several trackers can
  // share one id space.
  explicit SortTracker(ObjectClass cls, TrackerConfig config = {},
                       std::shared_ptr<TrackId> id_source = nullptr);

  // Advances to `frame` (strictly greater than the previous frame) and
  // folds in the detections. Skipped frames count as frames without
  // detections. Detections of other classes throw InvalidArgument.
  void step(FrameIndex frame, std::span<const DetectionRecord> detections);

  // Tracks that are still alive, in id order.
  const std::vector<Track>& live() const { return live_; }
  // Tracks that died, in order of death (ties by id).
  const std::vector<Track>& finished() const { return finished_; }

  // Every track ever created, sorted by id. Live tracks keep their current
  // status.
  std::vector<Track> all_tracks() const;

  std::optional<FrameIndex> last_frame() const { return last_frame_; }
  ObjectClass object_class() const { return cls_; }

 private:
  void advance_one();

  ObjectClass cls_;
  TrackerConfig config_;
  std::shared_ptr<TrackId> next_id_;
  std::optional<FrameIndex> last_frame_;
  std::vector<Track> live_;
  std::vector<Track> finished_;
};

// Runs one SortTracker per object class (lane markings excluded) over a
// frame-sorted detection stream. Track ids are unique across classes.
class MultiClassTracker {
 public:
  explicit MultiClassTracker(TrackerConfig config = {});

  void step(FrameIndex frame, std::span<const DetectionRecord> detections);

  // Every track from every class, sorted by id.
  std::vector<Track> all_tracks() const;

 private:
  TrackerConfig config_;
  std::shared_ptr<TrackId> next_id_;
  std::map<ObjectClass, SortTracker> trackers_;
  std::optional<FrameIndex> last_frame_;
};

// Convenience: tracks a whole sequence frame by frame over [0, frame_count).
std::vector<Track> track_sequence(std::span<const DetectionRecord> records, FrameIndex frame_count,
                                  const TrackerConfig& config = {});

}  // namespace roadsafe
