#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "roadsafe/fusion.hpp"
#include "roadsafe/metrics.hpp"
#include "roadsafe/tracker.hpp"

namespace roadsafe {

struct EvaluationConfig {
  double iou_threshold = 0.5;
  double confidence_threshold = 0.5;
};

struct PipelineConfig {
  TrackerConfig tracker;
  FusionConfig fusion;
  MetricsConfig metrics;
  EvaluationConfig evaluation;
  double max_gps_gap_s = 5.0;

  void validate() const;
};

// JSON object with optional sections "tracker", "fusion", "metrics",
// "evaluation" and the key "max_gps_gap_s". Missing keys keep their
// defaults; unknown keys throw InvalidArgument so typos surface.
PipelineConfig config_from_json(std::string_view text);
std::string config_to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace roadsafe
