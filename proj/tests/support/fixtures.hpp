#pragma once

#include <filesystem>
#include <string>

#include "roadsafe/pipeline.hpp"
#include "roadsafe/scenario.hpp"

namespace roadsafe::testing {

SequenceInput as_input(const ScenarioOutput& sim);

// A 1.2 km zero-noise sequence with a few of every object kind: 8 lights
// 165 m apart, 4 signs (1 defective), potholes clustered in two stretches,
// 6 single-rider motorcycles (2 without helmet, plates KA01A1000..) and
// a lane profile that fades half way.
ScenarioSpec small_scene(const std::string& sequence_id = "small");

// Fresh, empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace roadsafe::testing
