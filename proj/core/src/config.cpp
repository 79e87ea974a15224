#include "roadsafe/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "roadsafe/error.hpp"

namespace roadsafe {
namespace {

using nlohmann::json;

// Reads every known key of `section` into the matching field and rejects
// anything else.
class SectionReader {
 public:
  SectionReader(const json& root, const char* name) : name_(name) {
    if (root.contains(name)) {
      node_ = &root.at(name);
      if (!node_->is_object()) throw InvalidArgument(std::string("config section ") + name + " must be an object");
    }
  }

  template <typename T>
  SectionReader& read(const char* key, T& field) {
    seen_.push_back(key);
    if (node_ && node_->contains(key)) {
      try {
        field = node_->at(key).get<T>();
      } catch (const json::exception&) {
        throw InvalidArgument(std::string("config key ") + name_ + "." + key + " has the wrong type");
      }
    }
    return *this;
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, _] : node_->items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw InvalidArgument("unknown config key " + std::string(name_) + "." + key);
      }
    }
  }

 private:
  const char* name_;
  const json* node_ = nullptr;
  std::vector<std::string> seen_;
};

}  // namespace

void PipelineConfig::validate() const {
  tracker.validate();
  fusion.validate();
  metrics.validate();
  if (!(evaluation.iou_threshold > 0 && evaluation.iou_threshold <= 1)) {
    throw InvalidArgument("evaluation.iou_threshold must lie in (0,1]");
  }
  if (!(evaluation.confidence_threshold >= 0 && evaluation.confidence_threshold <= 1)) {
    throw InvalidArgument("evaluation.confidence_threshold must lie in [0,1]");
  }
  if (!(max_gps_gap_s > 0)) throw InvalidArgument("max_gps_gap_s must be positive");
}

PipelineConfig config_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw InvalidArgument("config must be a JSON object");

  PipelineConfig c;
  SectionReader(root, "tracker")
      .read("iou_threshold", c.tracker.iou_threshold)
      .read("min_hits", c.tracker.min_hits)
      .read("max_age", c.tracker.max_age)
      .read("process_noise_scale", c.tracker.kalman.process_noise_scale)
      .read("measurement_noise_scale", c.tracker.kalman.measurement_noise_scale)
      .finish();
  SectionReader(root, "fusion")
      .read("min_track_frames", c.fusion.min_track_frames)
      .read("rider_overlap_ratio", c.fusion.rider_overlap_ratio)
      .read("rider_vertical_tolerance", c.fusion.rider_vertical_tolerance)
      .read("min_shared_frames", c.fusion.min_shared_frames)
      .read("min_plate_support", c.fusion.min_plate_support)
      .finish();
  SectionReader(root, "metrics")
      .read("lane_stretch_m", c.metrics.lane_stretch_m)
      .read("pothole_stretch_m", c.metrics.pothole_stretch_m)
      .read("lane_fair_min", c.metrics.lane_fair_min)
      .read("lane_faded_min", c.metrics.lane_faded_min)
      .read("pothole_fair_max", c.metrics.pothole_fair_max)
      .read("pothole_average_max", c.metrics.pothole_average_max)
      .read("streetlight_gap_alert_m", c.metrics.streetlight_gap_alert_m)
      .finish();
  SectionReader(root, "evaluation")
      .read("iou_threshold", c.evaluation.iou_threshold)
      .read("confidence_threshold", c.evaluation.confidence_threshold)
      .finish();
  for (const auto& [key, _] : root.items()) {
    if (key != "tracker" && key != "fusion" && key != "metrics" && key != "evaluation" && key != "max_gps_gap_s") {
      throw InvalidArgument("unknown config key " + key);
    }
  }
  if (root.contains("max_gps_gap_s")) {
    if (!root["max_gps_gap_s"].is_number()) throw InvalidArgument("config key max_gps_gap_s must be a number");
    c.max_gps_gap_s = root["max_gps_gap_s"].get<double>();
  }
  c.validate();
  return c;
}

std::string config_to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["tracker"] = {{"iou_threshold", c.tracker.iou_threshold},
                  {"min_hits", c.tracker.min_hits},
                  {"max_age", c.tracker.max_age},
                  {"process_noise_scale", c.tracker.kalman.process_noise_scale},
                  {"measurement_noise_scale", c.tracker.kalman.measurement_noise_scale}};
  j["fusion"] = {{"min_track_frames", c.fusion.min_track_frames},
                 {"rider_overlap_ratio", c.fusion.rider_overlap_ratio},
                 {"rider_vertical_tolerance", c.fusion.rider_vertical_tolerance},
                 {"min_shared_frames", c.fusion.min_shared_frames},
                 {"min_plate_support", c.fusion.min_plate_support}};
  j["metrics"] = {{"lane_stretch_m", c.metrics.lane_stretch_m},
                  {"pothole_stretch_m", c.metrics.pothole_stretch_m},
                  {"lane_fair_min", c.metrics.lane_fair_min},
                  {"lane_faded_min", c.metrics.lane_faded_min},
                  {"pothole_fair_max", c.metrics.pothole_fair_max},
                  {"pothole_average_max", c.metrics.pothole_average_max},
                  {"streetlight_gap_alert_m", c.metrics.streetlight_gap_alert_m}};
  j["evaluation"] = {{"iou_threshold", c.evaluation.iou_threshold},
                     {"confidence_threshold", c.evaluation.confidence_threshold}};
  j["max_gps_gap_s"] = c.max_gps_gap_s;
  return j.dump(2);
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace roadsafe
