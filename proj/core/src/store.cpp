#include "roadsafe/store.hpp"

#include <sqlite3.h>

#include <chrono>
#include <cstdlib>
#include <cmath>
#include <ctime>
#include <map>
#include <istream>
#include <sstream>

#include "json.hpp"

namespace roadsafe {
namespace {

using nlohmann::json;

constexpr const char* kSchema = R"sql(
PRAGMA journal_mode = WAL;
PRAGMA foreign_keys = ON;
CREATE TABLE IF NOT EXISTS runs (
  sequence_id TEXT NOT NULL,
  run_id TEXT NOT NULL,
  created_at TEXT NOT NULL,
  PRIMARY KEY (sequence_id, run_id)
);
CREATE TABLE IF NOT EXISTS irregularities (
  id TEXT PRIMARY KEY,
  sequence_id TEXT NOT NULL,
  run_id TEXT NOT NULL,
  type TEXT NOT NULL,
  lat REAL NOT NULL,
  lon REAL NOT NULL,
  route_offset REAL NOT NULL,
  severity TEXT NOT NULL,
  track_id INTEGER,
  anchor_frame INTEGER,
  detail TEXT NOT NULL,
  evidence TEXT NOT NULL,
  created_at TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS irregularities_type ON irregularities (type);
CREATE TABLE IF NOT EXISTS stretches (
  sequence_id TEXT NOT NULL,
  kind TEXT NOT NULL,
  idx INTEGER NOT NULL,
  start_m REAL NOT NULL,
  end_m REAL NOT NULL,
  score REAL,
  count INTEGER NOT NULL,
  class TEXT NOT NULL,
  polyline TEXT NOT NULL,
  PRIMARY KEY (sequence_id, kind, idx)
);
CREATE TABLE IF NOT EXISTS sequence_metrics (
  sequence_id TEXT PRIMARY KEY,
  run_id TEXT NOT NULL,
  metrics TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS tickets (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  irregularity_id TEXT NOT NULL UNIQUE,
  sequence_id TEXT NOT NULL,
  group_id INTEGER NOT NULL,
  plate_text TEXT NOT NULL,
  status TEXT NOT NULL,
  note TEXT NOT NULL DEFAULT '',
  owner TEXT NOT NULL DEFAULT '',
  evidence TEXT NOT NULL,
  created_at TEXT NOT NULL,
  updated_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS rules (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  metric TEXT NOT NULL,
  threshold REAL NOT NULL,
  direction TEXT NOT NULL,
  active INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS registry (
  plate TEXT PRIMARY KEY,
  owner TEXT NOT NULL
);
)sql";

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Prepared statement with positional binding.
class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw Error(std::string("sqlite prepare: ") + sqlite3_errmsg(db));
    }
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& bind(int i, const std::string& v) {
    check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Stmt& bind(int i, double v) {
    check(sqlite3_bind_double(stmt_, i, v));
    return *this;
  }
  Stmt& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Stmt& bind(int i, int v) { return bind(i, static_cast<std::int64_t>(v)); }
  template <typename T>
  Stmt& bind(int i, const std::optional<T>& v) {
    if (v) return bind(i, *v);
    check(sqlite3_bind_null(stmt_, i));
    return *this;
  }

  // True while rows remain.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(std::string("sqlite step: ") + sqlite3_errmsg(db_));
  }
  void run() {
    while (step()) {
    }
  }

  std::string text(int c) const {
    const auto* p = sqlite3_column_text(stmt_, c);
    return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(sqlite3_column_bytes(stmt_, c)))
             : std::string();
  }
  double real(int c) const { return sqlite3_column_double(stmt_, c); }
  std::int64_t integer(int c) const { return sqlite3_column_int64(stmt_, c); }
  bool null(int c) const { return sqlite3_column_type(stmt_, c) == SQLITE_NULL; }

 private:
  void check(int rc) const {
    if (rc != SQLITE_OK) throw Error(std::string("sqlite bind: ") + sqlite3_errmsg(db_));
  }
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown";
    sqlite3_free(err);
    throw Error("sqlite: " + msg);
  }
}

class Transaction {
 public:
  explicit Transaction(sqlite3* db) : db_(db) { exec(db_, "BEGIN IMMEDIATE"); }
  ~Transaction() {
    if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void commit() {
    exec(db_, "COMMIT");
    done_ = true;
  }

 private:
  sqlite3* db_;
  bool done_ = false;
};

std::string kind_name(StretchKind k) { return k == StretchKind::Lane ? "lane" : "pothole"; }

std::string frames_json(const std::vector<FrameIndex>& frames) { return json(frames).dump(); }
std::vector<FrameIndex> frames_from(const std::string& s) { return json::parse(s).get<std::vector<FrameIndex>>(); }

Irregularity read_irregularity(const Stmt& s) {
  Irregularity it;
  it.id = s.text(0);
  it.sequence_id = s.text(1);
  it.type = parse_irregularity_type(s.text(2)).value_or(IrregularityType::Pothole);
  it.position = {s.real(3), s.real(4)};
  it.route_offset = s.real(5);
  it.severity = s.text(6);
  if (!s.null(7)) it.track_id = s.integer(7);
  if (!s.null(8)) it.anchor_frame = s.integer(8);
  it.detail = s.text(9);
  it.evidence = frames_from(s.text(10));
  it.created_at = s.text(11);
  return it;
}

constexpr const char* kIrregularityColumns =
    "id, sequence_id, type, lat, lon, route_offset, severity, track_id, anchor_frame, detail, evidence, created_at";

Ticket read_ticket(const Stmt& s) {
  Ticket t;
  t.id = s.integer(0);
  t.irregularity_id = s.text(1);
  t.sequence_id = s.text(2);
  t.group_id = s.integer(3);
  t.plate_text = s.text(4);
  t.status = parse_ticket_status(s.text(5)).value_or(TicketStatus::Pending);
  t.note = s.text(6);
  t.owner = s.text(7);
  t.evidence = frames_from(s.text(8));
  t.created_at = s.text(9);
  t.updated_at = s.text(10);
  return t;
}

constexpr const char* kTicketColumns =
    "id, irregularity_id, sequence_id, group_id, plate_text, status, note, owner, evidence, created_at, updated_at";

WarningRule read_rule(const Stmt& s) {
  WarningRule r;
  r.id = s.integer(0);
  r.metric = s.text(1);
  r.threshold = s.real(2);
  r.direction = parse_rule_direction(s.text(3)).value_or(RuleDirection::Above);
  r.active = s.integer(4) != 0;
  return r;
}

}  // namespace

RunRecord make_run_record(const SequenceResult& result, std::string run_id) {
  RunRecord r;
  r.run_id = std::move(run_id);
  r.sequence_id = result.sequence_id;
  r.irregularities = result.irregularities;
  r.stretches = result.lane_stretches;
  r.stretches.insert(r.stretches.end(), result.pothole_stretches.begin(), result.pothole_stretches.end());
  r.metrics = result.metrics;
  return r;
}

Store::Store(const std::filesystem::path& path) {
  if (sqlite3_open_v2(path.string().c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw Error("cannot open store " + path.string() + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  try {
    exec(db_, kSchema);
  } catch (...) {
    sqlite3_close(db_);
    throw;
  }
}

Store::~Store() { sqlite3_close(db_); }

bool Store::persist(const RunRecord& run) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  {
    Stmt s(db_, "SELECT 1 FROM runs WHERE sequence_id = ? AND run_id = ?");
    s.bind(1, run.sequence_id).bind(2, run.run_id);
    if (s.step()) return false;
  }
  const std::string created = run.created_at.empty() ? utc_now() : run.created_at;
  Stmt(db_, "INSERT INTO runs VALUES (?, ?, ?)").bind(1, run.sequence_id).bind(2, run.run_id).bind(3, created).run();

  Stmt(db_, "DELETE FROM irregularities WHERE sequence_id = ?").bind(1, run.sequence_id).run();
  Stmt(db_, "DELETE FROM stretches WHERE sequence_id = ?").bind(1, run.sequence_id).run();

  for (const auto& it : run.irregularities) {
    if (!std::isfinite(it.position.lat) || !std::isfinite(it.position.lon)) {
      throw InvalidArgument("irregularity " + it.id + " has a non-finite position");
    }
    Stmt s(db_, "INSERT INTO irregularities VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)");
    s.bind(1, it.id)
        .bind(2, run.sequence_id)
        .bind(3, run.run_id)
        .bind(4, std::string(to_string(it.type)))
        .bind(5, it.position.lat)
        .bind(6, it.position.lon)
        .bind(7, it.route_offset)
        .bind(8, it.severity)
        .bind(9, it.track_id)
        .bind(10, it.anchor_frame)
        .bind(11, it.detail)
        .bind(12, frames_json(it.evidence))
        .bind(13, created)
        .run();
    if (it.type == IrregularityType::HelmetViolation) {
      Stmt t(db_,
             "INSERT INTO tickets (irregularity_id, sequence_id, group_id, plate_text, status, evidence, created_at, "
             "updated_at) VALUES (?, ?, ?, ?, 'pending', ?, ?, ?) "
             "ON CONFLICT (irregularity_id) DO UPDATE SET group_id = excluded.group_id, "
             "plate_text = excluded.plate_text, evidence = excluded.evidence, updated_at = excluded.updated_at "
             "WHERE status = 'pending'");
      t.bind(1, it.id)
          .bind(2, run.sequence_id)
          .bind(3, it.track_id.value_or(0))
          .bind(4, it.detail)
          .bind(5, frames_json(it.evidence))
          .bind(6, created)
          .bind(7, created)
          .run();
    }
  }

  std::map<StretchKind, int> idx;
  for (const auto& st : run.stretches) {
    json line = json::array();
    for (const auto& p : st.polyline) line.push_back({p.lon, p.lat});
    Stmt(db_, "INSERT INTO stretches VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)")
        .bind(1, run.sequence_id)
        .bind(2, kind_name(st.kind))
        .bind(3, idx[st.kind]++)
        .bind(4, st.start_m)
        .bind(5, st.end_m)
        .bind(6, st.score)
        .bind(7, st.count)
        .bind(8, st.label)
        .bind(9, line.dump())
        .run();
  }

  Stmt(db_, "INSERT OR REPLACE INTO sequence_metrics VALUES (?, ?, ?)")
      .bind(1, run.sequence_id)
      .bind(2, run.run_id)
      .bind(3, sequence_metrics_to_json(run.metrics))
      .run();
  tx.commit();
  return true;
}

std::vector<std::string> Store::runs(const std::string& sequence_id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, "SELECT run_id FROM runs WHERE sequence_id = ? ORDER BY created_at, run_id");
  s.bind(1, sequence_id);
  std::vector<std::string> out;
  while (s.step()) out.push_back(s.text(0));
  return out;
}

IrregularityPage Store::query_irregularities(const IrregularityFilter& f) const {
  std::string where = " WHERE 1 = 1";
  if (f.type) where += " AND type = ?1";
  if (f.severity) where += " AND severity = ?2";
  if (f.sequence_id) where += " AND sequence_id = ?3";
  if (f.bbox) where += " AND lon >= ?4 AND lon <= ?5 AND lat >= ?6 AND lat <= ?7";
  auto bind_filter = [&f](Stmt& s) {
    if (f.type) s.bind(1, std::string(to_string(*f.type)));
    if (f.severity) s.bind(2, *f.severity);
    if (f.sequence_id) s.bind(3, *f.sequence_id);
    if (f.bbox) s.bind(4, f.bbox->min_lon).bind(5, f.bbox->max_lon).bind(6, f.bbox->min_lat).bind(7, f.bbox->max_lat);
  };

  std::lock_guard lock(mu_);
  IrregularityPage page;
  {
    const std::string sql = "SELECT COUNT(*) FROM irregularities" + where;
    Stmt s(db_, sql.c_str());
    bind_filter(s);
    if (s.step()) page.total = static_cast<std::size_t>(s.integer(0));
  }
  const std::string sql =
      std::string("SELECT ") + kIrregularityColumns + " FROM irregularities" + where + " ORDER BY id LIMIT ?8 OFFSET ?9";
  Stmt s(db_, sql.c_str());
  bind_filter(s);
  s.bind(8, static_cast<std::int64_t>(f.limit)).bind(9, static_cast<std::int64_t>(f.offset));
  while (s.step()) page.items.push_back(read_irregularity(s));
  return page;
}

Irregularity Store::irregularity(const std::string& id) const {
  std::lock_guard lock(mu_);
  const std::string sql = std::string("SELECT ") + kIrregularityColumns + " FROM irregularities WHERE id = ?";
  Stmt s(db_, sql.c_str());
  s.bind(1, id);
  if (!s.step()) throw NotFound("no irregularity " + id);
  return read_irregularity(s);
}

std::vector<Stretch> Store::stretches(std::optional<StretchKind> kind,
                                      const std::optional<std::string>& sequence_id) const {
  std::string sql =
      "SELECT sequence_id, kind, start_m, end_m, score, count, class, polyline FROM stretches WHERE 1 = 1";
  if (kind) sql += " AND kind = ?1";
  if (sequence_id) sql += " AND sequence_id = ?2";
  sql += " ORDER BY sequence_id, kind, idx";
  std::lock_guard lock(mu_);
  Stmt s(db_, sql.c_str());
  if (kind) s.bind(1, kind_name(*kind));
  if (sequence_id) s.bind(2, *sequence_id);
  std::vector<Stretch> out;
  while (s.step()) {
    Stretch st;
    st.sequence_id = s.text(0);
    st.kind = s.text(1) == "lane" ? StretchKind::Lane : StretchKind::Pothole;
    st.start_m = s.real(2);
    st.end_m = s.real(3);
    if (!s.null(4)) st.score = s.real(4);
    st.count = static_cast<int>(s.integer(5));
    st.label = s.text(6);
    for (const auto& p : json::parse(s.text(7))) st.polyline.push_back({p.at(1).get<double>(), p.at(0).get<double>()});
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<SequenceMetrics> Store::sequence_metrics() const {
  std::lock_guard lock(mu_);
  Stmt s(db_, "SELECT metrics FROM sequence_metrics ORDER BY sequence_id");
  std::vector<SequenceMetrics> out;
  while (s.step()) out.push_back(sequence_metrics_from_json(s.text(0)));
  return out;
}

SafetyReport Store::report() const { return build_report(sequence_metrics()); }

std::vector<Ticket> Store::tickets(std::optional<TicketStatus> status) const {
  std::string sql = std::string("SELECT ") + kTicketColumns + " FROM tickets";
  if (status) sql += " WHERE status = ?";
  sql += " ORDER BY id";
  std::lock_guard lock(mu_);
  Stmt s(db_, sql.c_str());
  if (status) s.bind(1, std::string(to_string(*status)));
  std::vector<Ticket> out;
  while (s.step()) out.push_back(read_ticket(s));
  return out;
}

Ticket Store::ticket_locked(std::int64_t id) const {
  const std::string sql = std::string("SELECT ") + kTicketColumns + " FROM tickets WHERE id = ?";
  Stmt s(db_, sql.c_str());
  s.bind(1, id);
  if (!s.step()) throw NotFound("no ticket " + std::to_string(id));
  return read_ticket(s);
}

Ticket Store::ticket(std::int64_t id) const {
  std::lock_guard lock(mu_);
  return ticket_locked(id);
}

Ticket Store::review_ticket(std::int64_t id, ReviewAction action, const std::string& note) {
  std::lock_guard lock(mu_);
  const Ticket current = ticket_locked(id);
  const TicketStatus next = next_status(current.status, action);
  std::string owner;
  if (action == ReviewAction::Issue) {
    if (current.plate_text.empty()) throw RegistryMiss("ticket " + std::to_string(id) + " has no plate");
    Stmt s(db_, "SELECT owner FROM registry WHERE plate = ?");
    s.bind(1, current.plate_text);
    if (!s.step()) throw RegistryMiss("plate " + current.plate_text + " is not registered");
    owner = s.text(0);
  }
  // Compare-and-set: the write only lands if the ticket is still pending.
  Stmt u(db_, "UPDATE tickets SET status = ?, note = ?, owner = ?, updated_at = ? WHERE id = ? AND status = 'pending'");
  u.bind(1, std::string(to_string(next))).bind(2, note).bind(3, owner).bind(4, utc_now()).bind(5, id).run();
  if (sqlite3_changes(db_) != 1) throw Conflict("ticket " + std::to_string(id) + " is no longer pending");
  return ticket_locked(id);
}

std::vector<WarningRule> Store::rules() const {
  std::lock_guard lock(mu_);
  Stmt s(db_, "SELECT id, metric, threshold, direction, active FROM rules ORDER BY id");
  std::vector<WarningRule> out;
  while (s.step()) out.push_back(read_rule(s));
  return out;
}

WarningRule Store::rule_locked(std::int64_t id) const {
  Stmt s(db_, "SELECT id, metric, threshold, direction, active FROM rules WHERE id = ?");
  s.bind(1, id);
  if (!s.step()) throw NotFound("no rule " + std::to_string(id));
  return read_rule(s);
}

WarningRule Store::rule(std::int64_t id) const {
  std::lock_guard lock(mu_);
  return rule_locked(id);
}

WarningRule Store::create_rule(WarningRule rule) {
  rule.validate();
  std::lock_guard lock(mu_);
  Stmt(db_, "INSERT INTO rules (metric, threshold, direction, active) VALUES (?, ?, ?, ?)")
      .bind(1, rule.metric)
      .bind(2, rule.threshold)
      .bind(3, std::string(to_string(rule.direction)))
      .bind(4, rule.active ? 1 : 0)
      .run();
  return rule_locked(sqlite3_last_insert_rowid(db_));
}

WarningRule Store::update_rule(std::int64_t id, WarningRule rule) {
  rule.validate();
  std::lock_guard lock(mu_);
  Stmt(db_, "UPDATE rules SET metric = ?, threshold = ?, direction = ?, active = ? WHERE id = ?")
      .bind(1, rule.metric)
      .bind(2, rule.threshold)
      .bind(3, std::string(to_string(rule.direction)))
      .bind(4, rule.active ? 1 : 0)
      .bind(5, id)
      .run();
  if (sqlite3_changes(db_) != 1) throw NotFound("no rule " + std::to_string(id));
  return rule_locked(id);
}

void Store::delete_rule(std::int64_t id) {
  std::lock_guard lock(mu_);
  Stmt(db_, "DELETE FROM rules WHERE id = ?").bind(1, id).run();
  if (sqlite3_changes(db_) != 1) throw NotFound("no rule " + std::to_string(id));
}

void Store::register_vehicle(const std::string& plate, const std::string& owner) {
  if (plate.empty()) throw InvalidArgument("empty plate");
  std::lock_guard lock(mu_);
  Stmt(db_, "INSERT OR REPLACE INTO registry VALUES (?, ?)").bind(1, plate).bind(2, owner).run();
}

std::optional<std::string> Store::registered_owner(const std::string& plate) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, "SELECT owner FROM registry WHERE plate = ?");
  s.bind(1, plate);
  if (!s.step()) return std::nullopt;
  return s.text(0);
}

std::size_t Store::load_registry(std::istream& in) {
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string plate;
    if (!(ls >> plate) || plate.starts_with('#')) continue;
    std::string owner;
    std::getline(ls >> std::ws, owner);
    register_vehicle(plate, owner);
    ++n;
  }
  return n;
}

std::filesystem::path store_path_from_env(const std::filesystem::path& fallback) {
  if (const char* p = std::getenv("ROADSAFE_STORE"); p != nullptr && *p != '\0') return p;
  return fallback;
}

}  // namespace roadsafe
