#include "roadsafe/service.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "roadsafe/geo.hpp"

namespace roadsafe {

std::string_view to_string(TicketStatus s) {
  switch (s) {
    case TicketStatus::Pending:
      return "pending";
    case TicketStatus::Issued:
      return "issued";
    case TicketStatus::Rejected:
      return "rejected";
  }
  return "unknown";
}

std::optional<TicketStatus> parse_ticket_status(std::string_view s) {
  if (s == "pending") return TicketStatus::Pending;
  if (s == "issued") return TicketStatus::Issued;
  if (s == "rejected") return TicketStatus::Rejected;
  return std::nullopt;
}

std::string_view to_string(ReviewAction a) { return a == ReviewAction::Issue ? "issue" : "reject"; }

std::optional<ReviewAction> parse_review_action(std::string_view s) {
  if (s == "issue") return ReviewAction::Issue;
  if (s == "reject") return ReviewAction::Reject;
  return std::nullopt;
}

TicketStatus next_status(TicketStatus from, ReviewAction action) {
  if (from != TicketStatus::Pending) {
    throw Conflict("ticket is already " + std::string(to_string(from)));
  }
  return action == ReviewAction::Issue ? TicketStatus::Issued : TicketStatus::Rejected;
}

std::string_view to_string(RuleDirection d) { return d == RuleDirection::Above ? "above" : "below"; }

std::optional<RuleDirection> parse_rule_direction(std::string_view s) {
  if (s == "above" || s == ">") return RuleDirection::Above;
  if (s == "below" || s == "<") return RuleDirection::Below;
  return std::nullopt;
}

void WarningRule::validate() const {
  if (!is_report_metric(metric)) throw InvalidArgument("unknown metric '" + metric + "'");
  if (!std::isfinite(threshold)) throw InvalidArgument("rule threshold must be finite");
}

std::vector<Warning> evaluate_warnings(const SafetyReport& report, std::span<const WarningRule> rules) {
  std::vector<Warning> out;
  for (const auto& rule : rules) {
    if (!rule.active || !is_report_metric(rule.metric)) continue;
    const auto value = report_metric(report, rule.metric);
    if (!value) continue;
    const bool hit = rule.direction == RuleDirection::Above ? *value > rule.threshold : *value < rule.threshold;
    if (!hit) continue;
    Warning w;
    w.rule_id = rule.id;
    w.metric = rule.metric;
    w.value = *value;
    w.threshold = rule.threshold;
    w.direction = rule.direction;
    w.message = rule.metric + " is " + format_double(*value) + ", " + std::string(to_string(rule.direction)) + " " +
                format_double(rule.threshold);
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<HeatCell> heatmap(std::span<const GeoPoint> points, double cell_m) {
  if (!(cell_m > 0) || !std::isfinite(cell_m)) throw InvalidArgument("cell size must be positive");
  if (points.empty()) return {};
  constexpr double rad = std::numbers::pi / 180.0;
  double lat_sum = 0;
  for (const auto& p : points) lat_sum += p.lat;
  const double k = std::max(1e-6, std::cos(lat_sum / static_cast<double>(points.size()) * rad));

  std::map<std::pair<std::int64_t, std::int64_t>, int> cells;  // (row, column)
  for (const auto& p : points) {
    const double x = kEarthRadiusM * p.lon * rad * k;
    const double y = kEarthRadiusM * p.lat * rad;
    ++cells[{static_cast<std::int64_t>(std::floor(y / cell_m)), static_cast<std::int64_t>(std::floor(x / cell_m))}];
  }
  std::vector<HeatCell> out;
  out.reserve(cells.size());
  for (const auto& [rc, count] : cells) {
    const double y = (static_cast<double>(rc.first) + 0.5) * cell_m;
    const double x = (static_cast<double>(rc.second) + 0.5) * cell_m;
    out.push_back({{y / kEarthRadiusM / rad, x / (kEarthRadiusM * k) / rad}, count});
  }
  return out;
}

}  // namespace roadsafe
