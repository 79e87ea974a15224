#include "roadsafe/report.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "roadsafe/error.hpp"

namespace roadsafe {
namespace {

using Field = std::optional<double> SafetyReport::*;

constexpr Field kFields[] = {
    &SafetyReport::sign_visibility_mean, &SafetyReport::defective_sign_pct,
    &SafetyReport::streetlight_gap_mean, &SafetyReport::lane_no_marking_pct,
    &SafetyReport::pothole_stretch_pct,  &SafetyReport::helmet_violation_pct,
};

std::string one_decimal(const std::optional<double>& v, std::string_view unit = "") {
  if (!v) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", *v);
  return std::string(buf) + std::string(unit);
}

std::optional<double> percent(long long part, long long whole) {
  if (whole <= 0) return std::nullopt;
  return 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

std::optional<double> report_metric(const SafetyReport& report, std::string_view name) {
  for (std::size_t i = 0; i < std::size(kReportMetricNames); ++i) {
    if (kReportMetricNames[i] == name) return report.*kFields[i];
  }
  throw InvalidArgument("unknown report metric '" + std::string(name) + "'");
}

bool is_report_metric(std::string_view name) {
  for (auto n : kReportMetricNames) {
    if (n == name) return true;
  }
  return false;
}

SafetyReport build_report(std::span<const SequenceMetrics> sequences) {
  SafetyReport r;

  double vis_sum = 0;
  long long vis_n = 0;
  long long signs = 0, defective = 0;
  double gap_weighted = 0, gap_weight = 0, gap_plain = 0;
  long long gap_n = 0;
  long long lane_classified = 0, lane_bad = 0;
  long long pothole_total = 0, pothole_with = 0;
  long long riders = 0, no_helmet = 0;

  for (const auto& s : sequences) {
    for (double v : s.sign_visibility_m) {
      vis_sum += v;
      ++vis_n;
    }
    signs += s.fused_signs;
    defective += s.defective_signs;
    if (s.streetlight_gap_mean) {
      gap_weighted += s.route_length_m * *s.streetlight_gap_mean;
      gap_weight += s.route_length_m;
      gap_plain += *s.streetlight_gap_mean;
      ++gap_n;
    }
    for (const auto& st : s.lane_stretches) {
      if (!st.score) continue;
      ++lane_classified;
      if (st.label == "faded" || st.label == "absent") ++lane_bad;
    }
    for (const auto& st : s.pothole_stretches) {
      ++pothole_total;
      if (st.count >= 1) ++pothole_with;
    }
    riders += s.grouped_riders;
    no_helmet += s.no_helmet_riders;
  }

  if (vis_n > 0) r.sign_visibility_mean = vis_sum / static_cast<double>(vis_n);
  r.defective_sign_pct = percent(defective, signs);
  if (gap_n > 0) {
    r.streetlight_gap_mean = gap_weight > 0 ? gap_weighted / gap_weight : gap_plain / static_cast<double>(gap_n);
  }
  r.lane_no_marking_pct = percent(lane_bad, lane_classified);
  r.pothole_stretch_pct = percent(pothole_with, pothole_total);
  r.helmet_violation_pct = percent(no_helmet, riders);
  return r;
}

void emit_report_csv(std::ostream& out, const SafetyReport& report) {
  for (std::size_t i = 0; i < std::size(kReportMetricNames); ++i) {
    out << (i ? "," : "") << kReportMetricNames[i];
  }
  out << '\n';
  for (std::size_t i = 0; i < std::size(kFields); ++i) {
    out << (i ? "," : "") << one_decimal(report.*kFields[i]);
  }
  out << '\n';
}

void emit_report_text(std::ostream& out, const SafetyReport& report) {
  out << "Traffic signs   Visibility-Range      " << one_decimal(report.sign_visibility_mean, "m") << '\n'
      << "Traffic signs   Defective             " << one_decimal(report.defective_sign_pct, " %") << '\n'
      << "Street lights   Avg. pair distance    " << one_decimal(report.streetlight_gap_mean, "m") << '\n'
      << "Lanes           No markings           " << one_decimal(report.lane_no_marking_pct, " %") << '\n'
      << "Potholes        Stretches w/ potholes " << one_decimal(report.pothole_stretch_pct, " %") << '\n'
      << "Helmet          Violating riders      " << one_decimal(report.helmet_violation_pct, " %") << '\n';
}

std::string report_to_json(const SafetyReport& report) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < std::size(kFields); ++i) {
    const auto& v = report.*kFields[i];
    j[std::string(kReportMetricNames[i])] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  }
  return j.dump();
}

SafetyReport report_from_json(std::string_view text) {
  SafetyReport r;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("report JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("report JSON must be an object");
  for (std::size_t i = 0; i < std::size(kFields); ++i) {
    auto it = j.find(std::string(kReportMetricNames[i]));
    if (it != j.end() && it->is_number()) r.*kFields[i] = it->get<double>();
  }
  return r;
}

}  // namespace roadsafe
