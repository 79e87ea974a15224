#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadsafe/error.hpp"
#include "roadsafe/pipeline.hpp"
#include "roadsafe/report.hpp"

namespace roadsafe {

struct NotFound : Error {
  using Error::Error;
};
// A state change raced with, or was preceded by, another one.
struct Conflict : Error {
  using Error::Error;
};
// The plate of a ticket is not in the vehicle registry.
struct RegistryMiss : Error {
  using Error::Error;
};

enum class TicketStatus : std::uint8_t { Pending, Issued, Rejected };
enum class ReviewAction : std::uint8_t { Issue, Reject };

std::string_view to_string(TicketStatus s);
std::optional<TicketStatus> parse_ticket_status(std::string_view s);
std::string_view to_string(ReviewAction a);
std::optional<ReviewAction> parse_review_action(std::string_view s);

// Only pending tickets move; issue -> issued, reject -> rejected. Anything
// else throws Conflict.
TicketStatus next_status(TicketStatus from, ReviewAction action);

struct Ticket {
  std::int64_t id = 0;
  std::string irregularity_id;  // the helmet-violation record
  std::string sequence_id;
  std::int64_t group_id = 0;
  std::string plate_text;  // empty when no plate was fused
  TicketStatus status = TicketStatus::Pending;
  std::string note;
  std::string owner;  // registry entry, once issued
  std::vector<FrameIndex> evidence;
  std::string created_at;
  std::string updated_at;
};

enum class RuleDirection : std::uint8_t { Above, Below };
std::string_view to_string(RuleDirection d);
std::optional<RuleDirection> parse_rule_direction(std::string_view s);

struct WarningRule {
  std::int64_t id = 0;
  std::string metric;  // one of kReportMetricNames
  double threshold = 0;
  RuleDirection direction = RuleDirection::Above;
  bool active = true;

  // Throws InvalidArgument for an unknown metric or a non-finite threshold.
  void validate() const;
};

struct Warning {
  std::int64_t rule_id = 0;
  std::string metric;
  double value = 0;
  double threshold = 0;
  RuleDirection direction = RuleDirection::Above;
  std::string message;
};

// Active rules whose metric is present and strictly beyond the threshold in
// the rule's direction.
std::vector<Warning> evaluate_warnings(const SafetyReport& report, std::span<const WarningRule> rules);

struct HeatCell {
  GeoPoint center;
  int count = 0;
};

// Counts points per square cell of `cell_m` meters on an equirectangular
// grid anchored at the mean latitude. Cells are returned row by row from
// the south-west. Throws InvalidArgument unless cell_m > 0.
std::vector<HeatCell> heatmap(std::span<const GeoPoint> points, double cell_m);

}  // namespace roadsafe
