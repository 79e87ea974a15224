// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "roadsafe/evaluation.hpp"
#include "roadsafe/fusion.hpp"
#include "roadsafe/hungarian.hpp"
#include "roadsafe/ingest.hpp"
#include "roadsafe/kalman.hpp"
#include "roadsafe/metrics.hpp"
#include "roadsafe/pipeline.hpp"
#include "roadsafe/report.hpp"
#include "roadsafe/scenario.hpp"
#include "roadsafe/track_io.hpp"
#include "roadsafe/tracker.hpp"
#include "scenes.hpp"
#include "track_scoring.hpp"

using namespace roadsafe;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome hungarian_correctness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> dim(1, 7), small_int(0, 9);
  std::uniform_real_distribution<double> real(0, 100);
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int rows = dim(rng), cols = dim(rng);
    const bool integer = trial % 2 == 0;
    CostMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = integer ? small_int(rng) : real(rng);
    const auto a = hungarian(m);
    if (a.size() != static_cast<std::size_t>(std::min(rows, cols)) ||
        testing::row_order_cost(m, a) != testing::brute_force_min_cost(m)) {
      ++failures;
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 10.0,
          fmt("500 random matrices up to 7x7 (integer and real): %d mismatches, %.2f s (limit 10 s)", failures, secs)};
}

Outcome tracker_fidelity() {
  int bad_clean = 0, bad_missing = 0, scenes = 0, objects = 0;
  TrackerConfig config;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const int n = 1 + static_cast<int>(seed % 10);
    auto spec = testing::fidelity_scene(seed, n);
    ++scenes;

    const auto clean = generate(spec);
    const auto kept = testing::kept_tracks(track_sequence(clean.detections, clean.meta.frame_count, config));
    const auto s = testing::score_tracks(clean, kept);
    objects += s.objects_expected;
    if (s.objects_with_one_track != s.objects_expected || s.identity_switches != 0 || s.false_tracks != 0 ||
        kept.size() != static_cast<std::size_t>(s.objects_expected)) {
      ++bad_clean;
    }

    spec.noise.miss_rate = 0.10;
    spec.noise.max_consecutive_misses = config.max_age;
    const auto noisy = generate(spec);
    const auto kept_noisy = testing::kept_tracks(track_sequence(noisy.detections, noisy.meta.frame_count, config));
    const auto sn = testing::score_tracks(noisy, kept_noisy);
    if (kept_noisy.size() != static_cast<std::size_t>(sn.objects_expected) ||
        sn.objects_with_one_track != sn.objects_expected) {
      ++bad_missing;
    }
  }
  return {bad_clean == 0 && bad_missing == 0,
          fmt("%d scenes, %d objects (1-10 per scene): %d scenes off at zero noise, %d off with 10%% misses "
              "(streaks <= max_age)",
              scenes, objects, bad_clean, bad_missing)};
}

Outcome track_filter() {
  // Direct: spans 1..3 removed, 4..12 kept.
  std::vector<Track> synthetic;
  for (int span = 1; span <= 12; ++span) {
    Track t;
    t.id = span;
    t.first_frame = 100;
    t.last_frame = 100 + span - 1;
    synthetic.push_back(t);
  }
  const auto kept = filter_short_tracks(synthetic, FusionConfig{}.min_track_frames);
  bool direct = kept.size() == 9;
  for (const auto& t : kept) direct = direct && t.span() >= 4;

  // End to end: blips of 1-3 frames injected into clean scenes.
  int blips = 0, blip_survivors = 0, objects = 0, object_losses = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto spec = testing::fidelity_scene(seed, 1 + static_cast<int>(seed % 10));
    spec.noise.false_positive_rate = 0.05;
    spec.noise.max_blip_frames = 3;
    const auto sim = generate(spec);
    for (std::size_t i = 0; i < sim.detections.size(); ++i) {
      blips += sim.detection_object[i] < 0 && sim.detections[i].cls != ObjectClass::LaneMarking;
    }
    const auto all = track_sequence(sim.detections, sim.meta.frame_count);
    const auto survivors = testing::kept_tracks(all);
    const auto s = testing::score_tracks(sim, survivors);
    blip_survivors += s.false_tracks;
    objects += s.objects_expected;
    object_losses += s.objects_expected - s.objects_with_one_track;
  }
  return {direct && blip_survivors == 0 && object_losses == 0 && blips > 0,
          fmt("spans 1-3 dropped and 4-12 kept: %s; 100 scenes with %d blip detections: %d blip tracks survive, "
              "%d of %d real objects lost",
              direct ? "yes" : "no", blips, blip_survivors, object_losses, objects)};
}

Outcome kalman_numerics() {
  const KalmanModel model;
  const auto q = model.process_noise();
  const auto r = model.measurement_noise();
  const auto p0 = model.initial_covariance();
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0, 1);

  KalmanState s;
  s.mean << 0, 0, 400, 1.0, 0, 0, 0;
  s.covariance = p0;
  testing::PositionKalman pos{0, 0, p0(0, 0), 0, p0(4, 4), q(0, 0), q(4, 4), r(0, 0)};
  testing::ScalarKalman ratio{1.0, p0(3, 3), q(3, 3), r(3, 3)};
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  double worst = 0, drift = 0;
  double u = 0;
  for (int k = 0; k < 10000; ++k) {
    u += 0.5;
    MeasurementVector z;
    z << u + noise(rng), 3 * noise(rng), 400 + 5 * noise(rng), 1.0 + 0.05 * noise(rng);
    s = kalman_predict(s, model);
    if (k % 5 != 4) s = kalman_update(s, z, model);
    pos.predict();
    ratio.predict();
    if (k % 5 != 4) {
      pos.update(z(0));
      ratio.update(z(3));
    }
    worst = std::max({worst, rel(s.mean(0), pos.x), rel(s.mean(4), pos.v), rel(s.covariance(0, 0), pos.pxx),
                      rel(s.covariance(0, 4), pos.pxv), rel(s.covariance(4, 4), pos.pvv), rel(s.mean(3), ratio.x),
                      rel(s.covariance(3, 3), ratio.p)});
    drift = std::max(drift, (s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12 && drift < 1e-9,
          fmt("10^4 steps: max relative deviation from reference filters %.2e (limit 1e-12), symmetry drift %.2e "
              "(limit 1e-9)",
              worst, drift)};
}

Outcome metrics_vs_oracle() {
  const auto t0 = Clock::now();
  const auto city = reference_city();
  testing::TempDir dir("roadsafe-acceptance-city");
  std::vector<SequenceMetrics> metrics;
  for (const auto& spec : city) {
    const auto path = dir.path() / spec.sequence_id;
    write_scenario(generate(spec), path);
    metrics.push_back(run_sequence(load_sequence(path)).metrics);
  }
  const auto got = build_report(metrics);
  const double secs = seconds_since(t0);
  const auto want = oracle_metrics(city);

  bool ok = secs < 60.0;
  std::ostringstream detail;
  const char* sep = "";
  auto check = [&](const char* name, const std::optional<double>& g, const std::optional<double>& w, double abs_tol,
                   double rel_tol) {
    bool good = g && w && std::abs(*g - *w) <= std::max(abs_tol, rel_tol * std::abs(*w));
    ok = ok && good;
    detail << sep << name << ' ' << (g ? fmt("%.3f", *g) : "NA") << '/' << (w ? fmt("%.3f", *w) : "NA") << (good ? "" : "!");
    sep = "; ";
  };
  check("spacing", got.streetlight_gap_mean, want.streetlight_gap_mean, 2.0, 0);
  check("defective", got.defective_sign_pct, want.defective_sign_pct, 0, 0);
  check("violators", got.helmet_violation_pct, want.helmet_violation_pct, 0, 0);
  check("pothole-stretches", got.pothole_stretch_pct, want.pothole_stretch_pct, 0, 0);
  check("no-markings", got.lane_no_marking_pct, want.lane_no_marking_pct, 0, 0);
  check("visibility", got.sign_visibility_mean, want.sign_visibility_mean, 0, 0.05);
  detail << sep << fmt("%.1f s (limit 60 s)", secs);
  return {ok, "pipeline/oracle: " + detail.str()};
}

Outcome ap_oracle() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> n(1, 60);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int preds = n(rng);
    const double hit_rate = u(rng);
    std::vector<RankedFlag> flags;
    std::size_t tp = 0;
    for (int i = 0; i < preds; ++i) {
      const bool hit = u(rng) < hit_rate;
      tp += hit;
      flags.push_back({u(rng), hit});
    }
    const std::size_t n_gt = std::max<std::size_t>(1, tp + static_cast<std::size_t>(n(rng) % 8));
    worst = std::max(worst, std::abs(*average_precision(flags, n_gt) - testing::ap_midpoint_oracle(flags, n_gt)));
  }

  // Published precision/recall/F1 rows, all to two decimals. Each row is
  // reproduced through prf1 on an instance with exactly that precision and
  // recall; a row is consistent when its F1 lies in the range the rounding
  // of p and r allows.
  struct Row {
    const char* task;
    int p, r, f1;  // hundredths
  };
  const Row rows[] = {{"Street Lights", 77, 85, 81},
                      {"Traffic Signs", 88, 74, 80},
                      {"Traffic Participants", 82, 79, 80},
                      {"Helmet Violations", 78, 83, 81}};
  bool rows_ok = true;
  std::ostringstream detail;
  const char* sep = "";
  for (const auto& row : rows) {
    // tp = p*r*1e4; predictions = tp/p; ground truth = tp/r.
    const std::size_t tp = static_cast<std::size_t>(row.p * row.r);
    const std::size_t predicted = static_cast<std::size_t>(row.r) * 100;
    const std::size_t n_gt = static_cast<std::size_t>(row.p) * 100;
    std::vector<RankedFlag> flags;
    for (std::size_t i = 0; i < predicted; ++i) flags.push_back({0.9, i < tp});
    const auto prf = prf1(flags, n_gt, 0.5);
    const bool exact_pr = std::abs(prf.precision - row.p / 100.0) < 1e-12 && std::abs(prf.recall - row.r / 100.0) < 1e-12;
    const double point = std::round(prf.f1 * 100);
    auto f1 = [](double p, double r) { return 2 * p * r / (p + r); };
    const double lo = f1((row.p - 0.5) / 100, (row.r - 0.5) / 100);
    const double hi = f1((row.p + 0.5) / 100, (row.r + 0.5) / 100);
    const bool within = row.f1 / 100.0 + 0.005 > lo && row.f1 / 100.0 - 0.005 < hi;
    rows_ok = rows_ok && exact_pr && within;
    detail << sep << row.task << ' ' << fmt("%.2f", prf.f1)
           << (point == row.f1 ? "" : fmt(" (listed %.2f, within rounding: %s)", row.f1 / 100.0, within ? "yes" : "no"));
    sep = "; ";
  }
  return {worst <= 1e-9 && rows_ok,
          fmt("1000 random PR instances: max |ap - oracle| %.2e (limit 1e-9); F1 = 2pr/(p+r): ", worst) + detail.str()};
}

Outcome stratification() {
  // Full factorial over the condition levels (3 x 3 x 4 x 3 = 108 cells),
  // each holding a copy of the same detection block, so detector quality is
  // independent of the condition by construction. fps 1: frame == second.
  const int hours[] = {9, 13, 17};
  const int vehicles[] = {2, 6, 10};
  const std::pair<int, bool> roads[] = {{2, true}, {1, false}, {2, false}, {4, false}};
  const int potholes[] = {0, 3, 6};

  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> u(0, 1);
  constexpr int kBlockFrames = 12;
  const ObjectClass classes[] = {ObjectClass::StreetLight, ObjectClass::TrafficSign, ObjectClass::Rider,
                                 ObjectClass::Motorcycle,  ObjectClass::Helmet,      ObjectClass::Pothole};
  std::vector<GroundTruthBox> block_gt;
  std::vector<DetectionRecord> block_pred;
  for (int f = 0; f < kBlockFrames; ++f) {
    for (auto cls : classes) {
      const int n = static_cast<int>(u(rng) * 4);
      for (int i = 0; i < n; ++i) {
        const BoundingBox b{100.0 * i + 10, 50.0 * static_cast<int>(cls), 40, 40};
        block_gt.push_back({f, cls, b, false});
        if (u(rng) < 0.8) {
          const BoundingBox p{b.x + (u(rng) - 0.5) * 30, b.y + (u(rng) - 0.5) * 30, 40, 40};
          block_pred.push_back({f, cls, p, u(rng), {}});
        }
      }
      if (u(rng) < 0.3) block_pred.push_back({f, cls, {1500, 900, 30, 30}, u(rng), {}});
    }
  }
  std::sort(block_pred.begin(), block_pred.end(),
            [](const DetectionRecord& a, const DetectionRecord& b) { return a.frame < b.frame; });

  std::vector<GroundTruthBox> gt;
  std::vector<DetectionRecord> preds;
  std::vector<ConditionAnnotation> annotations;
  FrameIndex base = 0;
  for (int h : hours)
    for (int v : vehicles)
      for (const auto& [lanes, bridge] : roads)
        for (int p : potholes) {
          for (int f = 0; f < kBlockFrames; ++f) annotations.push_back({base + f, lanes, v, p, bridge, h});
          for (auto g : block_gt) {
            g.frame += base;
            gt.push_back(g);
          }
          for (auto d : block_pred) {
            d.frame += base;
            preds.push_back(d);
          }
          base += kBlockFrames;
        }

  const auto frames = evaluate_frames(preds, gt);
  const auto tasks = default_tasks();
  const auto report = stratify(frames, ConditionTable(annotations), 1.0, tasks);
  const auto scores = score_tasks(frames, tasks);

  double worst = 0;
  int populated = 0;
  bool pooled_exact = true;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (!report.pooled[t] || !scores[t].map50 || *report.pooled[t] != *scores[t].map50) pooled_exact = false;
    for (const auto& cell : report.cells[t]) {
      if (!cell) continue;
      ++populated;
      worst = std::max(worst, std::abs(*cell - *report.pooled[t]));
    }
  }
  return {worst <= 1e-9 && pooled_exact && populated == static_cast<int>(tasks.size() * kConditionColumns),
          fmt("%d populated cells, max |cell - pooled| %.2e (limit 1e-9); pooled mAP equals global mAP exactly: %s",
              populated, worst, pooled_exact ? "yes" : "no")};
}

Outcome throughput() {
  auto spec = reference_city().front();
  spec.noise.miss_rate = 0.05;
  spec.noise.max_consecutive_misses = 3;
  spec.noise.box_jitter_px = 1.0;
  spec.noise.false_positive_rate = 0.02;
  spec.noise.attribute_flip_prob = 0.1;
  const auto sim = generate(spec);
  std::ostringstream text;
  emit_detection_log(text, sim.detections);
  const std::string log = text.str();

  const auto t0 = Clock::now();
  std::istringstream in(log);
  SequenceInput input;
  input.meta = sim.meta;
  input.detections = parse_detection_log(in, sim.meta).records;
  input.gps = sim.gps;
  const auto result = run_sequence(input);
  const double secs = seconds_since(t0);
  const double rate = static_cast<double>(input.detections.size()) / secs;
  return {rate >= 5000 && !result.tracks.empty(),
          fmt("%zu records ingested, tracked, fused and measured in %.2f s: %.0f records/s (minimum 5000)",
              input.detections.size(), secs, rate)};
}

Outcome determinism() {
  auto spec = reference_city().back();
  spec.noise.miss_rate = 0.1;
  spec.noise.box_jitter_px = 1.5;
  spec.noise.false_positive_rate = 0.03;
  spec.noise.attribute_flip_prob = 0.15;
  const auto input = testing::as_input(generate(spec));
  auto run = [&input] {
    const auto r = run_sequence(input);
    std::ostringstream tracks, stretches;
    emit_track_log(tracks, r.tracks);
    std::vector<Stretch> all = r.lane_stretches;
    all.insert(all.end(), r.pothole_stretches.begin(), r.pothole_stretches.end());
    emit_stretches(stretches, all);
    return std::array<std::string, 3>{tracks.str(), stretches.str(),
                                      report_to_json(build_report(std::vector{r.metrics}))};
  };
  const auto a = run();
  const auto b = run();
  return {a == b && !a[0].empty(), fmt("two runs on a noisy sequence: track log %s, stretch CSV %s, report %s",
                                       a[0] == b[0] ? "identical" : "DIFFERENT", a[1] == b[1] ? "identical" : "DIFFERENT",
                                       a[2] == b[2] ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"hungarian-correctness", hungarian_correctness},
      {"tracker-fidelity", tracker_fidelity},
      {"track-filter", track_filter},
      {"kalman-numerics", kalman_numerics},
      {"metrics-vs-oracle", metrics_vs_oracle},
      {"ap-oracle", ap_oracle},
      {"stratification", stratification},
      {"throughput", throughput},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed;
}
