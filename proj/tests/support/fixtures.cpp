#include "fixtures.hpp"

#include <unistd.h>

namespace roadsafe::testing {

SequenceInput as_input(const ScenarioOutput& sim) {
  SequenceInput in;
  in.meta = sim.meta;
  in.detections = sim.detections;
  in.gps = sim.gps;
  return in;
}

ScenarioSpec small_scene(const std::string& sequence_id) {
  ScenarioSpec spec;
  spec.sequence_id = sequence_id;
  spec.waypoints = straight_route({17.43, 78.41}, 1200);
  spec.streetlight_offsets = regular_offsets(20, 165, 1200);
  spec.signs = {{150, false, 4.5}, {420, true, 4.5}, {700, false, 4.0}, {980, false, 4.5}};
  spec.potholes = {{230, -1}, {260, 1}, {280, 0}, {830, 0.5}};
  for (int i = 0; i < 6; ++i) {
    RiderGroupPlacement g;
    g.offset_m = 100 + 170.0 * i;
    g.lateral_m = i % 2 ? 2 : -2;
    g.helmets = {i % 3 != 0};
    g.plate = "KA01A" + std::to_string(1000 + i);
    spec.rider_groups.push_back(g);
  }
  spec.lane_profile = {{0, 600, 0.6}, {600, 900, 0.1}, {900, 1200, 0.0}};
  spec.conditions = {{0, 2, 3, false}, {500, 1, 6, false}, {800, 4, 10, true}};
  return spec;
}

TempDir::TempDir(const std::string& name)
    : path_(std::filesystem::temp_directory_path() / (name + "-" + std::to_string(::getpid()))) {
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace roadsafe::testing
