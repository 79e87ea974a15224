#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "roadsafe/api.hpp"
#include "roadsafe/store.hpp"

using namespace roadsafe;
using nlohmann::json;

namespace {

struct ApiFixture {
  testing::TempDir dir{"roadsafe-api"};
  Store store{dir.path() / "s.db"};
  Api api{store};
  SequenceResult result = run_sequence(testing::as_input(generate(testing::small_scene())));

  ApiFixture() { store.persist(make_run_record(result, "r")); }

  ApiResponse call(const std::string& method, const std::string& path, std::map<std::string, std::string> query = {},
                   const std::string& body = "") {
    return api.handle({method, path, std::move(query), body});
  }
  json get(const std::string& path, std::map<std::string, std::string> query = {}) {
    const auto r = call("GET", path, std::move(query));
    REQUIRE(r.status == 200);
    return json::parse(r.body);
  }
};

}  // namespace

TEST_CASE_FIXTURE(ApiFixture, "health and unknown routes") {
  CHECK(get("/health")["status"] == "ok");
  CHECK(call("GET", "/nope").status == 404);
  CHECK(call("DELETE", "/health").status == 405);
}

TEST_CASE_FIXTURE(ApiFixture, "irregularity listing") {
  const auto all = get("/irregularities");
  CHECK(all["type"] == "FeatureCollection");
  CHECK(all["total"] == result.irregularities.size());
  CHECK(all["features"].size() == result.irregularities.size());

  const auto holes = get("/irregularities", {{"type", "pothole"}});
  CHECK(holes["total"] == 4);
  for (const auto& f : holes["features"]) CHECK(f["properties"]["type"] == "pothole");

  const auto page = get("/irregularities", {{"limit", "3"}, {"offset", "2"}});
  CHECK(page["features"].size() == 3);
  CHECK(page["total"] == result.irregularities.size());
  CHECK(page["features"][0]["id"] == all["features"][2]["id"]);

  const auto everywhere = get("/irregularities", {{"bbox", "-180,-90,180,90"}});
  CHECK(everywhere["total"] == result.irregularities.size());

  const std::string id = all["features"][0]["id"];
  CHECK(get("/irregularities/" + id)["id"] == id);
  CHECK(call("GET", "/irregularities/missing").status == 404);

  CHECK(call("GET", "/irregularities", {{"type", "unicorn"}}).status == 400);
  CHECK(call("GET", "/irregularities", {{"bbox", "1,2,3"}}).status == 400);
  CHECK(call("GET", "/irregularities", {{"limit", "-1"}}).status == 400);
  CHECK(call("GET", "/irregularities", {{"severity", "extreme"}}).status == 400);
}

TEST_CASE_FIXTURE(ApiFixture, "heatmap counts match item counts") {
  for (const char* type : {"pothole", "helmet_violation", "lane_marking_absence"}) {
    const auto h = get("/heatmap", {{"type", type}, {"cell_m", "150"}});
    const auto items = get("/irregularities", {{"type", type}});
    int sum = 0;
    for (const auto& f : h["features"]) sum += f["properties"]["count"].get<int>();
    CHECK(sum == items["total"].get<int>());
    CHECK(h["total"] == items["total"]);
  }
  CHECK(call("GET", "/heatmap", {{"cell_m", "0"}}).status == 400);
  CHECK(call("GET", "/heatmap", {{"cell_m", "abc"}}).status == 400);
}

TEST_CASE_FIXTURE(ApiFixture, "stretches and report") {
  const auto lanes = get("/stretches", {{"kind", "lane"}});
  CHECK(lanes["features"].size() == result.lane_stretches.size());
  CHECK(lanes["features"][0]["geometry"]["type"] == "LineString");
  const auto csv = call("GET", "/stretches", {{"kind", "pothole"}, {"format", "csv"}});
  CHECK(csv.status == 200);
  CHECK(csv.content_type == "text/csv");
  CHECK(csv.body.rfind("sequence,start_m,end_m,score_or_count,class\n", 0) == 0);

  const auto report = get("/report");
  const auto expected = build_report(std::vector{result.metrics});
  CHECK(report["defective_sign_pct"].get<double>() == *expected.defective_sign_pct);
  CHECK(report["helmet_violation_pct"].get<double>() == *expected.helmet_violation_pct);
  const auto report_csv = call("GET", "/report.csv");
  CHECK(report_csv.content_type == "text/csv");
}

TEST_CASE_FIXTURE(ApiFixture, "ticket review flow") {
  const auto pending = get("/tickets", {{"status", "pending"}});
  REQUIRE(pending.size() == 2);
  const auto a = pending[0]["id"].get<std::int64_t>();
  const auto b = pending[1]["id"].get<std::int64_t>();
  const std::string plate = pending[0]["plate_text"];
  store.register_vehicle(plate, "Asha Rao");

  auto r = call("POST", "/tickets/" + std::to_string(b) + "/review", {}, R"({"action":"issue"})");
  CHECK(r.status == 422);
  CHECK(get("/tickets/" + std::to_string(b))["status"] == "pending");

  r = call("POST", "/tickets/" + std::to_string(a) + "/review", {}, R"({"action":"issue","note":"clear"})");
  CHECK(r.status == 200);
  const auto issued = json::parse(r.body);
  CHECK(issued["status"] == "issued");
  CHECK(issued["owner"] == "Asha Rao");
  CHECK(issued["note"] == "clear");

  r = call("POST", "/tickets/" + std::to_string(a) + "/review", {}, R"({"action":"reject"})");
  CHECK(r.status == 409);

  r = call("POST", "/tickets/" + std::to_string(b) + "/review", {}, R"({"action":"reject"})");
  CHECK(r.status == 200);
  CHECK(get("/tickets", {{"status", "pending"}}).empty());
  CHECK(get("/tickets").size() == 2);

  CHECK(call("POST", "/tickets/999/review", {}, R"({"action":"reject"})").status == 404);
  CHECK(call("POST", "/tickets/" + std::to_string(a) + "/review", {}, "not json").status == 400);
  CHECK(call("POST", "/tickets/" + std::to_string(a) + "/review", {}, R"({"action":"approve"})").status == 400);
  CHECK(call("GET", "/tickets/abc").status == 400);
  CHECK(call("GET", "/tickets", {{"status", "open"}}).status == 400);
}

TEST_CASE_FIXTURE(ApiFixture, "rules and warnings") {
  CHECK(get("/rules").empty());
  CHECK(get("/warnings").empty());
  auto r = call("POST", "/rules", {}, R"({"metric":"helmet_violation_pct","threshold":20,"direction":"above"})");
  REQUIRE(r.status == 201);
  const auto id = json::parse(r.body)["id"].get<std::int64_t>();
  const auto warnings = get("/warnings");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0]["rule_id"] == id);

  r = call("PUT", "/rules/" + std::to_string(id), {}, R"({"threshold":90})");
  CHECK(r.status == 200);
  CHECK(json::parse(r.body)["metric"] == "helmet_violation_pct");
  CHECK(get("/warnings").empty());

  CHECK(call("POST", "/rules", {}, R"({"metric":"bogus","threshold":1})").status == 400);
  CHECK(call("POST", "/rules", {}, R"({"metric":"helmet_violation_pct"})").status == 400);
  CHECK(call("POST", "/rules", {}, R"({"metric":"helmet_violation_pct","threshold":1,"direction":"up"})").status == 400);
  CHECK(call("DELETE", "/rules/" + std::to_string(id)).status == 204);
  CHECK(call("GET", "/rules/" + std::to_string(id)).status == 404);
  CHECK(call("DELETE", "/rules/" + std::to_string(id)).status == 404);
}
