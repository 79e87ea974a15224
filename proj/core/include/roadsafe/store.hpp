#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "roadsafe/pipeline.hpp"
#include "roadsafe/service.hpp"

struct sqlite3;

namespace roadsafe {

struct RunRecord {
  std::string run_id;
  std::string sequence_id;
  std::vector<Irregularity> irregularities;
  std::vector<Stretch> stretches;  // lane and pothole
  SequenceMetrics metrics;
  std::string created_at;  // defaults to the current UTC time
};

RunRecord make_run_record(const SequenceResult& result, std::string run_id);

struct BoundingRegion {
  double min_lon = 0, min_lat = 0, max_lon = 0, max_lat = 0;

  bool contains(const GeoPoint& p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
  }
};

struct IrregularityFilter {
  std::optional<IrregularityType> type;
  std::optional<std::string> severity;
  std::optional<std::string> sequence_id;
  std::optional<BoundingRegion> bbox;
  std::size_t limit = 1000;
  std::size_t offset = 0;
};

struct IrregularityPage {
  std::vector<Irregularity> items;  // ordered by id
  std::size_t total = 0;            // matches before paging
};

// SQLite-backed store. All calls are serialized on one connection, so one
// Store may be shared between server threads; separate processes may open
// the same file (WAL journal).
class Store {
 public:
  explicit Store(const std::filesystem::path& path);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Replaces the sequence's irregularities, stretches and measures with the
  // run's, and opens a pending ticket for every new helmet violation.
  // Returns false, changing nothing, if (sequence_id, run_id) was stored
  // before. Any failure rolls the whole run back.
  bool persist(const RunRecord& run);

  std::vector<std::string> runs(const std::string& sequence_id) const;

  IrregularityPage query_irregularities(const IrregularityFilter& filter) const;
  Irregularity irregularity(const std::string& id) const;  // throws NotFound

  std::vector<Stretch> stretches(std::optional<StretchKind> kind = std::nullopt,
                                 const std::optional<std::string>& sequence_id = std::nullopt) const;

  std::vector<SequenceMetrics> sequence_metrics() const;
  SafetyReport report() const;

  std::vector<Ticket> tickets(std::optional<TicketStatus> status = std::nullopt) const;
  Ticket ticket(std::int64_t id) const;
  // Issue requires the plate to be registered (RegistryMiss otherwise);
  // the status changes only if it is still pending when written.
  Ticket review_ticket(std::int64_t id, ReviewAction action, const std::string& note);

  std::vector<WarningRule> rules() const;
  WarningRule rule(std::int64_t id) const;
  WarningRule create_rule(WarningRule rule);
  WarningRule update_rule(std::int64_t id, WarningRule rule);
  void delete_rule(std::int64_t id);

  void register_vehicle(const std::string& plate, const std::string& owner);
  std::optional<std::string> registered_owner(const std::string& plate) const;
  // Lines `plate owner...`; '#' comments and blank lines are skipped.
  // Returns the number of entries loaded.
  std::size_t load_registry(std::istream& in);

 private:
  Ticket ticket_locked(std::int64_t id) const;
  WarningRule rule_locked(std::int64_t id) const;

  sqlite3* db_ = nullptr;
  mutable std::mutex mu_;
};

// Store path from ROADSAFE_STORE, falling back to `fallback`.
std::filesystem::path store_path_from_env(const std::filesystem::path& fallback = "roadsafe.db");

}  // namespace roadsafe
