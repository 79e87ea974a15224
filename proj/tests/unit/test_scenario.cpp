#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "roadsafe/error.hpp"
#include "roadsafe/geo.hpp"
#include "roadsafe/ingest.hpp"
#include "roadsafe/scenario.hpp"

using namespace roadsafe;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("straight routes have the requested length") {
  const auto route = straight_route({17.4, 78.4}, 3300);
  CHECK(route_length(route) == doctest::Approx(3300).epsilon(1e-9));
  CHECK(haversine(point_along(route, 1000), route.front()) == doctest::Approx(1000).epsilon(1e-6));
}

TEST_CASE("regular light placement") {
  const auto lights = regular_offsets(0, 165, 3300);
  CHECK(lights.size() == 21);
  ScenarioSpec spec;
  spec.waypoints = straight_route({17.4, 78.4}, 3300);
  spec.streetlight_offsets = lights;
  const auto sim = generate(spec);
  int n = 0;
  for (const auto& o : sim.objects) n += o.cls == ObjectClass::StreetLight;
  CHECK(n == 21);
  CHECK(*oracle_metrics(spec).streetlight_gap_mean == 165.0);
}

TEST_CASE("a noiseless pothole gives one contiguous detection streak") {
  ScenarioSpec spec;
  spec.waypoints = straight_route({17.4, 78.4}, 200);
  spec.potholes = {{100, 0}};
  const auto sim = generate(spec);
  std::vector<FrameIndex> frames;
  for (const auto& d : sim.detections) {
    if (d.cls == ObjectClass::Pothole) frames.push_back(d.frame);
  }
  REQUIRE(frames.size() > 10);
  CHECK(frames.back() - frames.front() + 1 == static_cast<FrameIndex>(frames.size()));
  // Boxes grow as the ego approaches.
  double prev = 0;
  for (const auto& d : sim.detections) {
    if (d.cls != ObjectClass::Pothole) continue;
    CHECK(d.box.area() > prev);
    prev = d.box.area();
  }
}

TEST_CASE("generation is deterministic for a seed") {
  auto spec = reference_city(5).front();
  spec.noise.miss_rate = 0.1;
  spec.noise.box_jitter_px = 2;
  spec.noise.false_positive_rate = 0.05;
  const auto dir = std::filesystem::temp_directory_path() / "roadsafe_unit_scenario";
  std::filesystem::remove_all(dir);
  write_scenario(generate(spec), dir / "a");
  write_scenario(generate(spec), dir / "b");
  for (const char* f : {"detections.log", "gps.log", "conditions.txt", "ground_truth.txt", "objects.txt", "meta.json"}) {
    CHECK_MESSAGE(slurp(dir / "a" / f) == slurp(dir / "b" / f), f);
  }
  spec.noise.seed += 1;
  write_scenario(generate(spec), dir / "c");
  CHECK(slurp(dir / "a" / "detections.log") != slurp(dir / "c" / "detections.log"));

  const auto meta = load_video_meta(dir / "a" / "meta.json");
  CHECK(meta.sequence_id == spec.sequence_id);
  std::ifstream det(dir / "a" / "detections.log");
  const auto log = parse_detection_log(det, meta);
  CHECK(log.diagnostics.empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("oracle helmet counts") {
  ScenarioSpec spec;
  spec.waypoints = straight_route({17.4, 78.4}, 300);
  for (int i = 0; i < 5; ++i) spec.rider_groups.push_back({60.0 + 40 * i, 0, {true}, ""});
  CHECK(*oracle_metrics(spec).helmet_violation_pct == 0.0);
  spec.rider_groups[0].helmets = {false};
  CHECK(*oracle_metrics(spec).helmet_violation_pct == 20.0);
}

TEST_CASE("reference city parameters") {
  const auto city = reference_city();
  REQUIRE(city.size() == 2);
  int riders = 0, violators = 0, signs = 0, defective = 0;
  for (const auto& spec : city) {
    for (const auto& g : spec.rider_groups) {
      for (bool h : g.helmets) {
        ++riders;
        violators += !h;
      }
    }
    for (const auto& s : spec.signs) {
      ++signs;
      defective += s.defective;
    }
  }
  CHECK(riders == 1000);
  CHECK(violators == 459);
  CHECK(signs == 8);
  CHECK(defective == 3);
  const auto r = oracle_metrics(city);
  CHECK(*r.streetlight_gap_mean == doctest::Approx(165.0).epsilon(1e-12));
  CHECK(*r.defective_sign_pct == 37.5);
  CHECK(*r.helmet_violation_pct == doctest::Approx(45.9).epsilon(1e-12));
  CHECK(*r.pothole_stretch_pct == 4.0);
}

TEST_CASE("spec validation") {
  ScenarioSpec spec;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.waypoints = straight_route({17.4, 78.4}, 100);
  CHECK_NOTHROW(spec.validate());
  spec.noise.miss_rate = 1.5;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}
