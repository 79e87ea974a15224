#include "doctest.h"
#include "roadsafe/error.hpp"
#include "roadsafe/tracker.hpp"
#include "scenes.hpp"
#include "track_scoring.hpp"

using namespace roadsafe;

namespace {

DetectionRecord det(FrameIndex f, BoundingBox b, ObjectClass c = ObjectClass::TrafficSign) {
  return {f, c, b, 0.9, {}};
}

}  // namespace

TEST_CASE("association") {
  const std::vector<BoundingBox> none;
  const std::vector<BoundingBox> dets{{0, 0, 10, 10}, {50, 50, 10, 10}};
  auto a = associate(none, dets, 0.3);
  CHECK(a.matches.empty());
  CHECK(a.unmatched_detections == std::vector<std::size_t>{0, 1});

  // IoU 0.8: a 10x10 box shifted by 10/9 px.
  const std::vector<BoundingBox> track{{0, 0, 10, 10}};
  const std::vector<BoundingBox> close{{10.0 / 9.0, 0, 10, 10}};
  a = associate(track, close, 0.3);
  CHECK(a.matches.size() == 1);

  // IoU 0.1: overlap 10*w with w = 20/11.
  const std::vector<BoundingBox> far{{10 - 20.0 / 11.0, 0, 10, 10}};
  a = associate(track, far, 0.3);
  CHECK(a.matches.empty());
  CHECK(a.unmatched_tracks == std::vector<std::size_t>{0});
  CHECK(a.unmatched_detections == std::vector<std::size_t>{0});
}

TEST_CASE("single object with perfect detections") {
  TrackerConfig config;
  SortTracker tracker(ObjectClass::TrafficSign, config);
  for (FrameIndex f = 0; f < 10; ++f) {
    const std::vector<DetectionRecord> d{det(f, {100.0 + f, 100, 30, 30})};
    tracker.step(f, d);
  }
  const auto tracks = tracker.all_tracks();
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].status == TrackStatus::Confirmed);
  CHECK(tracks[0].confirmed_frame == config.min_hits - 1);
  CHECK(tracks[0].hits == 10);
  CHECK(tracks[0].span() == 10);
}

TEST_CASE("tracks die after max_age empty frames") {
  TrackerConfig config;
  SortTracker tracker(ObjectClass::TrafficSign, config);
  for (FrameIndex f = 0; f < 5; ++f) {
    const std::vector<DetectionRecord> d{det(f, {100, 100, 30, 30}), det(f, {500, 100, 30, 30})};
    tracker.step(f, d);
  }
  for (FrameIndex f = 5; f < 5 + config.max_age; ++f) tracker.step(f, {});
  CHECK(tracker.live().size() == 2);
  tracker.step(5 + config.max_age, {});
  CHECK(tracker.live().empty());
  for (const auto& t : tracker.finished()) CHECK(t.status == TrackStatus::Dead);
}

TEST_CASE("skipped frames age tracks") {
  SortTracker tracker(ObjectClass::TrafficSign);
  tracker.step(0, std::vector<DetectionRecord>{det(0, {100, 100, 30, 30})});
  tracker.step(100, {});
  CHECK(tracker.live().empty());
}

TEST_CASE("tracker input validation") {
  SortTracker tracker(ObjectClass::TrafficSign);
  tracker.step(3, {});
  CHECK_THROWS_AS(tracker.step(3, {}), InvalidArgument);
  CHECK_THROWS_AS(tracker.step(4, std::vector<DetectionRecord>{det(4, {0, 0, 1, 1}, ObjectClass::Pothole)}),
                  InvalidArgument);
  TrackerConfig bad;
  bad.iou_threshold = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("ids are unique across classes") {
  MultiClassTracker tracker;
  for (FrameIndex f = 0; f < 4; ++f) {
    const std::vector<DetectionRecord> d{det(f, {100, 100, 30, 30}, ObjectClass::TrafficSign),
                                         det(f, {100, 100, 30, 30}, ObjectClass::Pothole)};
    tracker.step(f, d);
  }
  const auto tracks = tracker.all_tracks();
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].id != tracks[1].id);
  CHECK(tracks[0].cls != tracks[1].cls);
}

TEST_CASE("three objects with 5% dropout") {
  auto spec = testing::fidelity_scene(9, 3);
  spec.noise.miss_rate = 0.05;
  spec.noise.max_consecutive_misses = 5;
  spec.noise.seed = 9;
  const auto sim = generate(spec);
  const auto tracks = track_sequence(sim.detections, sim.meta.frame_count);
  const auto kept = testing::kept_tracks(tracks);
  const auto score = testing::score_tracks(sim, kept);
  CHECK(score.objects_expected > 0);
  CHECK(score.objects_with_one_track == score.objects_expected);
  CHECK(score.identity_switches == 0);
  CHECK(score.false_tracks == 0);
}
