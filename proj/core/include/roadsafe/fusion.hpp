#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsafe/tracker.hpp"

namespace roadsafe {

struct FusionConfig {
  int min_track_frames = 4;              // tracks spanning fewer frames are dropped
  double rider_overlap_ratio = 0.5;      // horizontal overlap >= ratio * min(width)
  double rider_vertical_tolerance = 0.3; // rider bottom may sit this many motorcycle heights above it
  int min_shared_frames = 3;             // rider and motorcycle must co-occur this often
  int min_plate_support = 2;

  void validate() const;
};

// Most frequent label. Ties go to "normal" or "helmet" when either is among
// the tied labels, otherwise to the lexicographically smallest.
// Throws InvalidArgument for an empty input.
std::string majority_vote(std::span<const std::string> labels);
std::string majority_vote(const std::map<std::string, int>& counts);

// Keeps tracks whose frame span (last - first + 1) is at least min_frames.
std::vector<Track> filter_short_tracks(std::span<const Track> tracks, int min_frames = 4);

struct FusedTrack {
  Track track;
  std::optional<std::string> fused_attr;  // sign_state for signs, helmet_state for riders
  std::map<std::string, int> vote_counts;
  int support = 0;  // frames that carried the attribute
};

FusedTrack fuse_track(Track track);

// Exact-string majority over plate reads; nullopt when empty or when the
// winner was read fewer than min_support times.
std::optional<std::string> fuse_plate(std::span<const std::string> plates, int min_support = 2);

struct RiderGroup {
  std::int64_t group_id = 0;
  FusedTrack motorcycle;
  std::vector<FusedTrack> riders;  // sorted by track id
  std::optional<std::string> plate_text;
  bool violation = false;
  int no_helmet_riders = 0;
  FrameIndex first_frame = 0;
  FrameIndex last_frame = 0;
  std::vector<FrameIndex> evidence_frames;  // frames showing a rider without helmet
};

// Groups riders with the motorcycle they ride. Each frame a rider shares
// with eligible motorcycles casts one vote: the candidate with the largest
// horizontal overlap whose box satisfies the geometric test, or "none".
// The per-rider majority decides; ties favour "none". Groups are numbered
// in motorcycle track-id order.
std::vector<RiderGroup> associate_riders(std::span<const FusedTrack> riders, std::span<const FusedTrack> motorcycles,
                                         const FusionConfig& config = {});

// `group_id sequence_id first-last plate_or_NONE n_riders n_no_helmet f1,f2,...`
// for every violating group.
void emit_violations(std::ostream& out, std::string_view sequence_id, std::span<const RiderGroup> groups);

}  // namespace roadsafe
