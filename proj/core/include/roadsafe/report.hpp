#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadsafe/metrics.hpp"

namespace roadsafe {

// City-level safety measures. A measure without supporting data is absent,
// never zero.
struct SafetyReport {
  std::optional<double> sign_visibility_mean;  // meters
  std::optional<double> defective_sign_pct;
  std::optional<double> streetlight_gap_mean;  // meters
  std::optional<double> lane_no_marking_pct;
  std::optional<double> pothole_stretch_pct;
  std::optional<double> helmet_violation_pct;

  friend bool operator==(const SafetyReport&, const SafetyReport&) = default;
};

inline constexpr std::string_view kReportMetricNames[] = {
    "sign_visibility_mean", "defective_sign_pct",   "streetlight_gap_mean",
    "lane_no_marking_pct",  "pothole_stretch_pct", "helmet_violation_pct",
};

// Looks a measure up by its name in kReportMetricNames. Throws
// InvalidArgument for an unknown name.
std::optional<double> report_metric(const SafetyReport& report, std::string_view name);
bool is_report_metric(std::string_view name);

// Per-sequence inputs to the city report.
struct SequenceMetrics {
  std::string sequence_id;
  double route_length_m = 0;
  std::vector<double> sign_visibility_m;
  int fused_signs = 0;
  int defective_signs = 0;
  std::optional<double> streetlight_gap_mean;
  int streetlights = 0;
  std::vector<Stretch> lane_stretches;
  std::vector<Stretch> pothole_stretches;
  int grouped_riders = 0;  // riders in a group with a fused helmet state
  int no_helmet_riders = 0;
};

// Pools sequences: visibility is a mean over all sign tracks, street-light
// spacing a route-length-weighted mean of per-sequence means, and the
// percentages are pooled counts.
SafetyReport build_report(std::span<const SequenceMetrics> sequences);

// Header plus one row, one decimal place, "NA" for absent measures.
void emit_report_csv(std::ostream& out, const SafetyReport& report);
// Human-readable table grouped by component.
void emit_report_text(std::ostream& out, const SafetyReport& report);

// Full-precision JSON object; null marks an absent measure.
std::string report_to_json(const SafetyReport& report);
SafetyReport report_from_json(std::string_view json);

}  // namespace roadsafe
