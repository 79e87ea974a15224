#include <sstream>

#include "doctest.h"
#include "roadsafe/error.hpp"
#include "roadsafe/ingest.hpp"
#include "roadsafe/scenario.hpp"

using namespace roadsafe;

namespace {

VideoMeta meta_100() {
  VideoMeta m;
  m.frame_count = 100;
  return m;
}

DetectionLog parse(const std::string& text, const VideoMeta& meta = meta_100()) {
  std::istringstream in(text);
  return parse_detection_log(in, meta);
}

}  // namespace

TEST_CASE("empty detection stream") {
  const auto log = parse("");
  CHECK(log.records.empty());
  CHECK(log.diagnostics.empty());
}

TEST_CASE("single detection line") {
  const auto log = parse("0 pothole 10 10 50 40 0.9\n");
  REQUIRE(log.records.size() == 1);
  const auto& r = log.records[0];
  CHECK(r.frame == 0);
  CHECK(r.cls == ObjectClass::Pothole);
  CHECK(r.box == BoundingBox{10, 10, 50, 40});
  CHECK(r.confidence == 0.9);
  CHECK(r.attrs == DetectionAttrs{});
}

TEST_CASE("attributes are parsed") {
  const auto log = parse(
      "3 traffic_sign 1 2 3 4 0.5 sign_state=defective\n"
      "4 rider 1 2 3 4 0.5 helmet_state=no_helmet\n"
      "5 license_plate 1 2 3 4 0.5 plate=AB12\n"
      "6 lane_marking 0 540 1920 540 1 lane_fraction=0.25\n");
  REQUIRE(log.records.size() == 4);
  CHECK(log.records[0].attrs.sign_state == SignState::Defective);
  CHECK(log.records[1].attrs.helmet_state == HelmetState::NoHelmet);
  CHECK(log.records[2].attrs.plate_text == "AB12");
  CHECK(log.records[3].attrs.lane_fraction == 0.25);
}

TEST_CASE("comments and blank lines are skipped") {
  const auto log = parse("# header\n\n   \n1 pothole 1 1 2 2 0.5\n");
  CHECK(log.records.size() == 1);
  CHECK(log.diagnostics.empty());
}

TEST_CASE("bad lines become diagnostics and are skipped") {
  const auto log = parse(
      "0 pothole 10 10 50 40 0.9\n"
      "garbage\n"
      "1 unicorn 1 1 1 1 0.5\n"
      "2 pothole 1 1 -5 1 0.5\n"
      "3 pothole 1 1 5 1 1.5\n"
      "500 pothole 1 1 5 1 0.5\n"
      "4 pothole 1 1 5 1 0.5\n");
  CHECK(log.records.size() == 2);
  CHECK(log.diagnostics.size() == 5);
  CHECK(log.malformed + log.rejected == 5);
  CHECK(log.diagnostics[0].line == 2);
}

TEST_CASE("records come back in frame order") {
  const auto log = parse("5 pothole 1 1 2 2 0.5\n4 pothole 1 1 2 2 0.5\n5 rider 1 1 2 2 0.5\n");
  REQUIRE(log.records.size() == 3);
  CHECK(log.records[0].frame == 4);
  CHECK(log.records[1].cls == ObjectClass::Pothole);
  CHECK(log.records[2].cls == ObjectClass::Rider);
  CHECK(log.diagnostics.empty());
}

TEST_CASE("simulated detections survive an emit/parse round trip") {
  auto spec = reference_city(3).front();
  spec.noise.box_jitter_px = 1.7;
  spec.noise.miss_rate = 0.05;
  spec.noise.false_positive_rate = 0.02;
  spec.noise.attribute_flip_prob = 0.1;
  const auto sim = generate(spec);
  std::vector<DetectionRecord> sample(sim.detections.begin(),
                                      sim.detections.begin() + std::min<std::size_t>(1000, sim.detections.size()));
  REQUIRE(sample.size() == 1000);
  std::ostringstream out;
  emit_detection_log(out, sample);
  const auto back = parse(out.str(), sim.meta);
  CHECK(back.diagnostics.empty());
  CHECK(back.records == sample);
}

TEST_CASE("gps log parsing") {
  std::istringstream in("0 10 20\n1 10 20.0001\n1 10 20.0002\nx\n2 95 20\n3 10 20.0003\n");
  const auto log = parse_gps_log(in);
  REQUIRE(log.samples.size() == 3);
  CHECK(log.samples[2] == GeoSample{3, 10, 20.0003});
  CHECK(log.diagnostics.size() == 3);
  std::ostringstream out;
  emit_gps_log(out, log.samples);
  std::istringstream again(out.str());
  CHECK(parse_gps_log(again).samples == log.samples);
}

TEST_CASE("condition labels follow the tabulated thresholds") {
  CHECK(label_condition({0, 1, 5, 0, false, 8}) ==
        ConditionLabel{RoadType::Narrow, TrafficDensity::Moderate, RoadDamage::Low, TimeOfDay::Morning});
  CHECK(label_condition({0, 4, 9, 5, false, 17}) ==
        ConditionLabel{RoadType::Highway, TrafficDensity::Dense, RoadDamage::High, TimeOfDay::Evening});
  CHECK(label_condition({0, 2, 0, 0, true, 12}).road_type == RoadType::Bridge);
  CHECK(label_condition({0, 6, 0, 0, true, 12}).road_type == RoadType::Bridge);
}

TEST_CASE("condition label boundaries") {
  auto road = [](int lanes) { return label_condition({0, lanes, 0, 0, false, 12}).road_type; };
  CHECK(road(1) == RoadType::Narrow);
  CHECK(road(2) == RoadType::Standard);
  CHECK(road(3) == RoadType::Standard);
  CHECK(road(4) == RoadType::Highway);
  auto traffic = [](int v) { return label_condition({0, 2, v, 0, false, 12}).traffic; };
  CHECK(traffic(0) == TrafficDensity::Sparse);
  CHECK(traffic(4) == TrafficDensity::Sparse);
  CHECK(traffic(5) == TrafficDensity::Moderate);
  CHECK(traffic(8) == TrafficDensity::Moderate);
  CHECK(traffic(9) == TrafficDensity::Dense);
  auto damage = [](int p) { return label_condition({0, 2, 0, p, false, 12}).damage; };
  CHECK(damage(2) == RoadDamage::Low);
  CHECK(damage(3) == RoadDamage::Moderate);
  CHECK(damage(4) == RoadDamage::Moderate);
  CHECK(damage(5) == RoadDamage::High);
  auto tod = [](int h) { return label_condition({0, 2, 0, 0, false, h}).time_of_day; };
  CHECK(tod(6) == TimeOfDay::Unlabeled);
  CHECK(tod(7) == TimeOfDay::Morning);
  CHECK(tod(11) == TimeOfDay::Morning);
  CHECK(tod(12) == TimeOfDay::Noon);
  CHECK(tod(15) == TimeOfDay::Noon);
  CHECK(tod(16) == TimeOfDay::Evening);
  CHECK(tod(18) == TimeOfDay::Evening);
  CHECK(tod(19) == TimeOfDay::Unlabeled);
  CHECK_THROWS_AS(label_condition({0, 0, 0, 0, false, 12}), InvalidArgument);
  CHECK_THROWS_AS(label_condition({0, 2, -1, 0, false, 12}), InvalidArgument);
  CHECK_THROWS_AS(label_condition({0, 2, 0, 0, false, 24}), InvalidArgument);
}

TEST_CASE("condition file round trip and frame lookup") {
  std::vector<ConditionAnnotation> rows{{0, 2, 3, 0, false, 9}, {1, 1, 9, 5, true, 17}};
  std::ostringstream out;
  emit_condition_file(out, rows);
  std::istringstream in(out.str());
  const auto log = parse_condition_file(in);
  CHECK(log.diagnostics.empty());
  CHECK(log.annotations == rows);
  ConditionTable table(log.annotations);
  CHECK(table.label_for_frame(14, 15)->time_of_day == TimeOfDay::Morning);
  CHECK(table.label_for_frame(15, 15)->road_type == RoadType::Bridge);
  CHECK_FALSE(table.label_for_frame(30, 15).has_value());
}
