#include <algorithm>
#include <fstream>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "roadsafe/error.hpp"
#include "roadsafe/pipeline.hpp"

using namespace roadsafe;

namespace {

int count_type(const SequenceResult& r, IrregularityType t) {
  return static_cast<int>(std::count_if(r.irregularities.begin(), r.irregularities.end(),
                                        [t](const Irregularity& i) { return i.type == t; }));
}

}  // namespace

TEST_CASE("small scene end to end") {
  const auto spec = testing::small_scene();
  const auto sim = generate(spec);
  const auto result = run_sequence(testing::as_input(sim));

  CHECK(result.metrics.fused_signs == 4);
  CHECK(result.metrics.defective_signs == 1);
  CHECK(result.metrics.streetlights == static_cast<int>(spec.streetlight_offsets.size()));
  CHECK(result.metrics.grouped_riders == 6);
  CHECK(result.metrics.no_helmet_riders == 2);
  REQUIRE(result.groups.size() == 6);
  for (const auto& g : result.groups) {
    REQUIRE(g.plate_text.has_value());
    CHECK(g.plate_text->rfind("KA01A", 0) == 0);
  }

  const auto report = build_report(std::vector<SequenceMetrics>{result.metrics});
  const auto oracle = oracle_metrics(spec);
  CHECK(*report.defective_sign_pct == *oracle.defective_sign_pct);
  CHECK(*report.helmet_violation_pct == *oracle.helmet_violation_pct);
  CHECK(*report.pothole_stretch_pct == *oracle.pothole_stretch_pct);
  CHECK(*report.lane_no_marking_pct == *oracle.lane_no_marking_pct);
  CHECK(std::abs(*report.streetlight_gap_mean - *oracle.streetlight_gap_mean) <= 2.0);

  CHECK(count_type(result, IrregularityType::DefectiveSign) == 1);
  CHECK(count_type(result, IrregularityType::HelmetViolation) == 2);
  CHECK(count_type(result, IrregularityType::Pothole) == 4);
  CHECK(count_type(result, IrregularityType::MissingStreetLight) == 7);
  CHECK(count_type(result, IrregularityType::LaneMarkingAbsence) == 12);

  std::set<std::string> ids;
  for (const auto& i : result.irregularities) {
    CHECK(ids.insert(i.id).second);
    CHECK(std::isfinite(i.position.lat));
    CHECK(std::isfinite(i.position.lon));
    CHECK((i.severity == "low" || i.severity == "medium" || i.severity == "high"));
  }
}

TEST_CASE("irregularities survive GeoJSON") {
  const auto result = run_sequence(testing::as_input(generate(testing::small_scene())));
  const auto text = irregularities_to_geojson(result.irregularities);
  const auto back = irregularities_from_geojson(text);
  REQUIRE(back.size() == result.irregularities.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == result.irregularities[i].id);
    CHECK(back[i].position == result.irregularities[i].position);
    CHECK(back[i].evidence == result.irregularities[i].evidence);
    CHECK(back[i].track_id == result.irregularities[i].track_id);
  }
  CHECK_THROWS(irregularities_from_geojson("{\"type\": \"Point\"}"));
}

TEST_CASE("sequence metrics survive JSON") {
  const auto m = run_sequence(testing::as_input(generate(testing::small_scene()))).metrics;
  const auto back = sequence_metrics_from_json(sequence_metrics_to_json(m));
  CHECK(build_report(std::vector{back}) == build_report(std::vector{m}));
  CHECK(back.lane_stretches.size() == m.lane_stretches.size());
  CHECK(back.pothole_stretches.front().polyline == m.pothole_stretches.front().polyline);
}

TEST_CASE("sequence directories") {
  testing::TempDir dir("roadsafe-pipeline");
  const auto sim = generate(testing::small_scene());
  write_scenario(sim, dir.path());
  const auto in = load_sequence(dir.path());
  CHECK(in.diagnostics.empty());
  CHECK(in.detections == sim.detections);
  CHECK(in.gps == sim.gps);
  CHECK(in.meta.frame_count == sim.meta.frame_count);

  std::ofstream(dir.path() / "detections.log", std::ios::app) << "bogus line\n";
  CHECK(load_sequence(dir.path()).diagnostics.size() == 1);
  std::filesystem::remove(dir.path() / "gps.log");
  CHECK_THROWS_AS(load_sequence(dir.path()), IngestError);
}

TEST_CASE("an empty sequence yields no measures") {
  SequenceInput in;
  in.meta.frame_count = 10;
  const auto r = run_sequence(in);
  CHECK(r.irregularities.empty());
  CHECK(build_report(std::vector{r.metrics}) == SafetyReport{});
}
