#include "roadsafe/api.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"

namespace roadsafe {
namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

struct BadRequest : Error {
  using Error::Error;
};
struct MethodNotAllowed : Error {
  using Error::Error;
};

ApiResponse json_response(int status, const ojson& body) { return {status, "application/json", body.dump(2)}; }

ApiResponse error_response(int status, const std::string& message) {
  return json_response(status, ojson{{"error", message}});
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto end = pos == std::string_view::npos ? s.size() : pos;
    out.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

double parse_number(const std::string& s, const char* what) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw BadRequest(std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

std::int64_t parse_integer(const std::string& s, const char* what) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw BadRequest(std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::optional<std::string> param(const ApiRequest& r, const std::string& key) {
  auto it = r.query.find(key);
  if (it == r.query.end()) return std::nullopt;
  return it->second;
}

ojson feature(const Irregularity& it) {
  ojson p;
  p["id"] = it.id;
  p["type"] = std::string(to_string(it.type));
  p["sequence_id"] = it.sequence_id;
  p["route_offset"] = it.route_offset;
  p["severity"] = it.severity;
  p["track_id"] = it.track_id ? ojson(*it.track_id) : ojson(nullptr);
  p["anchor_frame"] = it.anchor_frame ? ojson(*it.anchor_frame) : ojson(nullptr);
  p["detail"] = it.detail;
  p["evidence"] = it.evidence;
  p["created_at"] = it.created_at;
  return {{"type", "Feature"},
          {"id", it.id},
          {"geometry", {{"type", "Point"}, {"coordinates", {it.position.lon, it.position.lat}}}},
          {"properties", std::move(p)}};
}

ojson ticket_json(const Ticket& t) {
  return {{"id", t.id},
          {"irregularity_id", t.irregularity_id},
          {"sequence_id", t.sequence_id},
          {"group_id", t.group_id},
          {"plate_text", t.plate_text},
          {"status", std::string(to_string(t.status))},
          {"note", t.note},
          {"owner", t.owner},
          {"evidence", t.evidence},
          {"created_at", t.created_at},
          {"updated_at", t.updated_at}};
}

ojson rule_json(const WarningRule& r) {
  return {{"id", r.id},
          {"metric", r.metric},
          {"threshold", r.threshold},
          {"direction", std::string(to_string(r.direction))},
          {"active", r.active}};
}

ojson report_json(const SafetyReport& r) { return ojson::parse(report_to_json(r)); }

json parse_body(const ApiRequest& r) {
  try {
    auto j = json::parse(r.body);
    if (!j.is_object()) throw BadRequest("request body must be a JSON object");
    return j;
  } catch (const json::parse_error&) {
    throw BadRequest("request body is not valid JSON");
  }
}

WarningRule rule_from(const json& j, WarningRule base = {}) {
  try {
    if (j.contains("metric")) base.metric = j.at("metric").get<std::string>();
    if (j.contains("threshold")) base.threshold = j.at("threshold").get<double>();
    if (j.contains("direction")) {
      auto d = parse_rule_direction(j.at("direction").get<std::string>());
      if (!d) throw BadRequest("direction must be 'above' or 'below'");
      base.direction = *d;
    }
    if (j.contains("active")) base.active = j.at("active").get<bool>();
  } catch (const json::exception&) {
    throw BadRequest("malformed rule");
  }
  return base;
}

BoundingRegion parse_bbox(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 4) throw BadRequest("bbox needs min_lon,min_lat,max_lon,max_lat");
  BoundingRegion b{parse_number(parts[0], "bbox"), parse_number(parts[1], "bbox"), parse_number(parts[2], "bbox"),
                   parse_number(parts[3], "bbox")};
  if (b.min_lon > b.max_lon || b.min_lat > b.max_lat) throw BadRequest("bbox corners are inverted");
  return b;
}

void require(const ApiRequest& r, const char* method) {
  if (r.method != method) throw MethodNotAllowed(r.method + " not allowed on " + r.path);
}

ApiResponse list_irregularities(const Store& store, const ApiRequest& r) {
  IrregularityFilter f;
  if (auto t = param(r, "type")) {
    f.type = parse_irregularity_type(*t);
    if (!f.type) throw BadRequest("unknown type '" + *t + "'");
  }
  if (auto s = param(r, "severity")) {
    if (*s != "low" && *s != "medium" && *s != "high") throw BadRequest("severity must be low, medium or high");
    f.severity = *s;
  }
  if (auto s = param(r, "sequence")) f.sequence_id = *s;
  if (auto b = param(r, "bbox")) f.bbox = parse_bbox(*b);
  if (auto l = param(r, "limit")) {
    const auto v = parse_integer(*l, "limit");
    if (v < 0 || v > 100000) throw BadRequest("limit must lie in [0,100000]");
    f.limit = static_cast<std::size_t>(v);
  }
  if (auto o = param(r, "offset")) {
    const auto v = parse_integer(*o, "offset");
    if (v < 0) throw BadRequest("offset must be >= 0");
    f.offset = static_cast<std::size_t>(v);
  }
  const auto page = store.query_irregularities(f);
  ojson fc{{"type", "FeatureCollection"}, {"total", page.total}, {"features", ojson::array()}};
  for (const auto& it : page.items) fc["features"].push_back(feature(it));
  return json_response(200, fc);
}

ApiResponse heatmap_response(const Store& store, const ApiRequest& r) {
  IrregularityFilter f;
  f.limit = std::numeric_limits<std::int64_t>::max();
  if (auto t = param(r, "type")) {
    f.type = parse_irregularity_type(*t);
    if (!f.type) throw BadRequest("unknown type '" + *t + "'");
  }
  const double cell = param(r, "cell_m") ? parse_number(*param(r, "cell_m"), "cell_m") : 250.0;
  if (!(cell > 0)) throw BadRequest("cell_m must be positive");
  std::vector<GeoPoint> points;
  for (const auto& it : store.query_irregularities(f).items) points.push_back(it.position);
  ojson fc{{"type", "FeatureCollection"}, {"cell_m", cell}, {"total", points.size()}, {"features", ojson::array()}};
  for (const auto& c : heatmap(points, cell)) {
    fc["features"].push_back({{"type", "Feature"},
                              {"geometry", {{"type", "Point"}, {"coordinates", {c.center.lon, c.center.lat}}}},
                              {"properties", {{"count", c.count}}}});
  }
  return json_response(200, fc);
}

ApiResponse stretches_response(const Store& store, const ApiRequest& r) {
  std::optional<StretchKind> kind;
  if (auto k = param(r, "kind")) {
    if (*k == "lane") {
      kind = StretchKind::Lane;
    } else if (*k == "pothole") {
      kind = StretchKind::Pothole;
    } else {
      throw BadRequest("kind must be lane or pothole");
    }
  }
  if (param(r, "format") == std::optional<std::string>("csv")) {
    std::ostringstream out;
    const auto st = store.stretches(kind, param(r, "sequence"));
    emit_stretches(out, st);
    return {200, "text/csv", out.str()};
  }
  ojson fc{{"type", "FeatureCollection"}, {"features", ojson::array()}};
  for (const auto& s : store.stretches(kind, param(r, "sequence"))) {
    ojson coords = ojson::array();
    for (const auto& p : s.polyline) coords.push_back({p.lon, p.lat});
    fc["features"].push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
         {"properties",
          {{"sequence_id", s.sequence_id},
           {"kind", s.kind == StretchKind::Lane ? "lane" : "pothole"},
           {"start_m", s.start_m},
           {"end_m", s.end_m},
           {"score", s.score ? ojson(*s.score) : ojson(nullptr)},
           {"count", s.count},
           {"class", s.label}}}});
  }
  return json_response(200, fc);
}

ApiResponse route(Store& store, const ApiRequest& r) {
  auto parts = split(r.path, '/');
  if (!parts.empty() && parts.front().empty()) parts.erase(parts.begin());
  if (!parts.empty() && parts.back().empty()) parts.pop_back();
  if (parts.empty()) throw NotFound("no route " + r.path);
  const std::string& head = parts[0];

  if (head == "health" && parts.size() == 1) {
    require(r, "GET");
    return json_response(200, {{"status", "ok"}});
  }
  if (head == "irregularities") {
    require(r, "GET");
    if (parts.size() == 1) return list_irregularities(store, r);
    if (parts.size() == 2) return json_response(200, feature(store.irregularity(parts[1])));
  }
  if (head == "heatmap" && parts.size() == 1) {
    require(r, "GET");
    return heatmap_response(store, r);
  }
  if (head == "stretches" && parts.size() == 1) {
    require(r, "GET");
    return stretches_response(store, r);
  }
  if (head == "report" && parts.size() == 1) {
    require(r, "GET");
    return json_response(200, report_json(store.report()));
  }
  if (head == "report.csv" && parts.size() == 1) {
    require(r, "GET");
    std::ostringstream out;
    emit_report_csv(out, store.report());
    return {200, "text/csv", out.str()};
  }
  if (head == "tickets") {
    if (parts.size() == 1) {
      require(r, "GET");
      std::optional<TicketStatus> status;
      if (auto s = param(r, "status")) {
        status = parse_ticket_status(*s);
        if (!status) throw BadRequest("unknown status '" + *s + "'");
      }
      ojson arr = ojson::array();
      for (const auto& t : store.tickets(status)) arr.push_back(ticket_json(t));
      return json_response(200, arr);
    }
    const auto id = parse_integer(parts[1], "ticket id");
    if (parts.size() == 2) {
      require(r, "GET");
      return json_response(200, ticket_json(store.ticket(id)));
    }
    if (parts.size() == 3 && parts[2] == "review") {
      require(r, "POST");
      const auto body = parse_body(r);
      if (!body.contains("action") || !body["action"].is_string()) throw BadRequest("missing action");
      const auto action = parse_review_action(body["action"].get<std::string>());
      if (!action) throw BadRequest("action must be issue or reject");
      std::string note;
      if (body.contains("note")) {
        if (!body["note"].is_string()) throw BadRequest("note must be a string");
        note = body["note"].get<std::string>();
      }
      return json_response(200, ticket_json(store.review_ticket(id, *action, note)));
    }
  }
  if (head == "rules") {
    if (parts.size() == 1) {
      if (r.method == "GET") {
        ojson arr = ojson::array();
        for (const auto& rule : store.rules()) arr.push_back(rule_json(rule));
        return json_response(200, arr);
      }
      require(r, "POST");
      const auto body = parse_body(r);
      if (!body.contains("metric") || !body.contains("threshold")) throw BadRequest("rule needs metric and threshold");
      return json_response(201, rule_json(store.create_rule(rule_from(body))));
    }
    if (parts.size() == 2) {
      const auto id = parse_integer(parts[1], "rule id");
      if (r.method == "GET") return json_response(200, rule_json(store.rule(id)));
      if (r.method == "PUT") return json_response(200, rule_json(store.update_rule(id, rule_from(parse_body(r), store.rule(id)))));
      require(r, "DELETE");
      store.delete_rule(id);
      return {204, "application/json", ""};
    }
  }
  if (head == "warnings" && parts.size() == 1) {
    require(r, "GET");
    const auto rules = store.rules();
    ojson arr = ojson::array();
    for (const auto& w : evaluate_warnings(store.report(), rules)) {
      arr.push_back({{"rule_id", w.rule_id},
                     {"metric", w.metric},
                     {"value", w.value},
                     {"threshold", w.threshold},
                     {"direction", std::string(to_string(w.direction))},
                     {"message", w.message}});
    }
    return json_response(200, arr);
  }
  throw NotFound("no route " + r.method + " " + r.path);
}

}  // namespace

ApiResponse Api::handle(const ApiRequest& request) const {
  try {
    return route(store_, request);
  } catch (const BadRequest& e) {
    return error_response(400, e.what());
  } catch (const InvalidArgument& e) {
    return error_response(400, e.what());
  } catch (const NotFound& e) {
    return error_response(404, e.what());
  } catch (const MethodNotAllowed& e) {
    return error_response(405, e.what());
  } catch (const Conflict& e) {
    return error_response(409, e.what());
  } catch (const RegistryMiss& e) {
    return error_response(422, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

}  // namespace roadsafe
