// roadsafe: command-line front end for the road-safety pipeline.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "roadsafe/config.hpp"
#include "roadsafe/evaluation.hpp"
#include "roadsafe/pipeline.hpp"
#include "roadsafe/scenario.hpp"
#include "roadsafe/server.hpp"
#include "roadsafe/store.hpp"
#include "roadsafe/track_io.hpp"

namespace fs = std::filesystem;
using namespace roadsafe;

namespace {

std::ofstream create(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw Error("cannot write " + p.string());
  return f;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diags, std::size_t max_lines = 20) {
  for (std::size_t i = 0; i < diags.size() && i < max_lines; ++i) {
    std::cerr << "  line " << diags[i].line << ": " << diags[i].message << '\n';
  }
  if (diags.size() > max_lines) std::cerr << "  ... " << diags.size() - max_lines << " more\n";
}

struct Options {
  std::string config_path;
  PipelineConfig config() const { return config_path.empty() ? PipelineConfig{} : load_config(config_path); }
};

int cmd_ingest(const Options&, const fs::path& dir, const std::string& out, bool strict) {
  const auto in = load_sequence(dir);
  std::map<std::string, std::size_t> per_class;
  for (const auto& d : in.detections) ++per_class[std::string(to_string(d.cls))];
  std::cout << "sequence " << in.meta.sequence_id << ": " << in.meta.frame_count << " frames at "
            << format_double(in.meta.fps) << " fps\n";
  std::cout << "detections " << in.detections.size() << '\n';
  for (const auto& [cls, n] : per_class) std::cout << "  " << cls << ' ' << n << '\n';
  std::cout << "gps samples " << in.gps.size() << '\n';
  std::cout << "diagnostics " << in.diagnostics.size() << '\n';
  print_diagnostics(in.diagnostics);
  if (!out.empty()) {
    auto f = create(out);
    emit_detection_log(f, in.detections);
  }
  return strict && !in.diagnostics.empty() ? 2 : 0;
}

int cmd_track(const Options& opt, const fs::path& dir, fs::path out) {
  const auto cfg = opt.config();
  const auto in = load_sequence(dir);
  print_diagnostics(in.diagnostics);
  const auto tracks = track_sequence(in.detections, in.meta.frame_count, cfg.tracker);
  if (out.empty()) out = dir / "out";
  {
    auto f = create(out / "tracks.log");
    emit_track_log(f, tracks);
  }
  {
    auto f = create(out / "track_summary.txt");
    emit_track_summary(f, tracks);
  }
  std::cout << tracks.size() << " tracks written to " << out << '\n';
  return 0;
}

int cmd_fuse(const Options& opt, const fs::path& dir, fs::path out, bool persist, const std::string& store_flag,
             std::string run_id) {
  const auto cfg = opt.config();
  const auto in = load_sequence(dir);
  print_diagnostics(in.diagnostics);
  const auto res = run_sequence(in, cfg);
  if (out.empty()) out = dir / "out";
  {
    auto f = create(out / "tracks.log");
    emit_track_log(f, res.tracks);
  }
  {
    auto f = create(out / "track_summary.txt");
    emit_track_summary(f, res.tracks);
  }
  {
    auto f = create(out / "violations.txt");
    emit_violations(f, res.sequence_id, res.groups);
  }
  {
    auto f = create(out / "irregularities.geojson");
    f << irregularities_to_geojson(res.irregularities) << '\n';
  }
  {
    auto f = create(out / "stretches.csv");
    auto all = res.lane_stretches;
    all.insert(all.end(), res.pothole_stretches.begin(), res.pothole_stretches.end());
    emit_stretches(f, all);
  }
  {
    auto f = create(out / "metrics.json");
    f << sequence_metrics_to_json(res.metrics) << '\n';
  }
  const SequenceMetrics one[] = {res.metrics};
  {
    auto f = create(out / "report.csv");
    emit_report_csv(f, build_report(one));
  }
  std::cout << res.fused.size() << " fused tracks, " << res.groups.size() << " rider groups, "
            << res.irregularities.size() << " irregularities written to " << out << '\n';

  if (persist) {
    Store store(store_flag.empty() ? store_path_from_env() : fs::path(store_flag));
    if (run_id.empty()) run_id = "default";
    const bool stored = store.persist(make_run_record(res, run_id));
    std::cout << (stored ? "persisted run " : "run already stored: ") << res.sequence_id << '/' << run_id << '\n';
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& metrics_files, const std::string& store_flag, const std::string& format,
               const std::string& out) {
  SafetyReport report;
  if (metrics_files.empty()) {
    Store store(store_flag.empty() ? store_path_from_env() : fs::path(store_flag));
    report = store.report();
  } else {
    std::vector<SequenceMetrics> seqs;
    for (const auto& f : metrics_files) seqs.push_back(sequence_metrics_from_json(slurp(f)));
    report = build_report(seqs);
  }
  std::ostringstream text;
  if (format == "csv") {
    emit_report_csv(text, report);
  } else if (format == "json") {
    text << report_to_json(report) << '\n';
  } else {
    emit_report_text(text, report);
  }
  if (out.empty()) {
    std::cout << text.str();
  } else {
    create(out) << text.str();
  }
  return 0;
}

int cmd_eval(const Options& opt, const fs::path& detections, const fs::path& ground_truth, const fs::path& meta_path,
             const std::string& conditions, const fs::path& out) {
  const auto cfg = opt.config();
  const auto meta = load_video_meta(meta_path);
  std::ifstream df(detections);
  if (!df) throw Error("cannot read " + detections.string());
  const auto log = parse_detection_log(df, meta);
  print_diagnostics(log.diagnostics);
  std::ifstream gf(ground_truth);
  if (!gf) throw Error("cannot read " + ground_truth.string());
  const auto gt = parse_ground_truth(gf);

  const auto frames = evaluate_frames(log.records, gt, cfg.evaluation.iou_threshold);
  const auto tasks = default_tasks();
  const auto scores = score_tasks(frames, tasks, cfg.evaluation.confidence_threshold);
  std::ostringstream table;
  emit_detection_table(table, scores);
  std::cout << table.str();
  if (!out.empty()) create(out / "detection.csv") << table.str();

  if (!conditions.empty()) {
    std::ifstream cf(conditions);
    if (!cf) throw Error("cannot read " + conditions);
    const auto clog = parse_condition_file(cf);
    print_diagnostics(clog.diagnostics);
    const ConditionTable table_c(clog.annotations);
    const auto strat = stratify(frames, table_c, meta.fps, tasks);
    std::ostringstream st;
    emit_stratified_table(st, strat);
    std::cout << '\n' << st.str();
    if (!out.empty()) create(out / "stratified.csv") << st.str();
  }
  return 0;
}

int cmd_simulate(const fs::path& out, std::uint64_t seed, const NoiseModel& noise) {
  auto city = reference_city(seed);
  for (auto& spec : city) {
    const auto s = spec.noise.seed;
    spec.noise = noise;
    spec.noise.seed = s;
    const auto sim = generate(spec);
    write_scenario(sim, out / spec.sequence_id);
    std::cout << spec.sequence_id << ": " << sim.meta.frame_count << " frames, " << sim.detections.size()
              << " detections\n";
  }
  create(out / "oracle.json") << report_to_json(oracle_metrics(city)) << '\n';
  return 0;
}

int cmd_serve(const std::string& store_flag, const std::string& host, int port, const std::string& registry) {
  const fs::path path = store_flag.empty() ? store_path_from_env() : fs::path(store_flag);
  Store store(path);
  if (!registry.empty()) {
    std::ifstream f(registry);
    if (!f) throw Error("cannot read " + registry);
    std::cerr << "loaded " << store.load_registry(f) << " registry entries\n";
  }
  std::cerr << "store " << path << '\n';
  run_server(store, host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Road-safety analytics: tracking, fusion, geotagging, metrics and review service"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "JSON file with tracker/fusion/metrics thresholds")
      ->check(CLI::ExistingFile);

  std::string dir, out, store_flag, run_id, format = "text", host = "127.0.0.1", registry;
  bool strict = false, persist = false;
  int port = 8080;

  auto* ingest = app.add_subcommand("ingest", "Validate a sequence directory and summarize its logs");
  ingest->add_option("dir", dir, "Sequence directory (meta.json, detections.log, gps.log)")->required();
  ingest->add_option("-o,--out", out, "Write the accepted records, normalized, to this file");
  ingest->add_flag("--strict", strict, "Exit with status 2 if any line was skipped");

  auto* track = app.add_subcommand("track", "Track detections and write the track log");
  track->add_option("dir", dir, "Sequence directory")->required();
  track->add_option("-o,--out", out, "Output directory (default <dir>/out)");

  auto* fuse = app.add_subcommand("fuse", "Run tracking, fusion, geotagging and per-sequence measures");
  fuse->add_option("dir", dir, "Sequence directory")->required();
  fuse->add_option("-o,--out", out, "Output directory (default <dir>/out)");
  fuse->add_flag("--persist", persist, "Store the run (path from --store or ROADSAFE_STORE)");
  fuse->add_option("--store", store_flag, "SQLite store path");
  fuse->add_option("--run-id", run_id, "Run identifier; persisting the same run twice is a no-op");

  std::vector<std::string> metrics_files;
  auto* report = app.add_subcommand("report", "City-level report from metrics.json files or the store");
  report->add_option("metrics", metrics_files, "metrics.json files written by fuse")->check(CLI::ExistingFile);
  report->add_option("--store", store_flag, "SQLite store path (used when no files are given)");
  report->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  report->add_option("-o,--out", out, "Write to this file instead of stdout");

  std::string det_path, gt_path, meta_path, cond_path;
  auto* eval = app.add_subcommand("eval", "Detection metrics, optionally stratified by capture condition");
  eval->add_option("--detections", det_path, "Detection log")->required()->check(CLI::ExistingFile);
  eval->add_option("--ground-truth", gt_path, "Ground-truth boxes")->required()->check(CLI::ExistingFile);
  eval->add_option("--meta", meta_path, "meta.json of the sequence")->required()->check(CLI::ExistingFile);
  eval->add_option("--conditions", cond_path, "Per-second condition annotations")->check(CLI::ExistingFile);
  eval->add_option("-o,--out", out, "Also write detection.csv and stratified.csv here");

  std::uint64_t seed = 7;
  NoiseModel noise;
  auto* simulate = app.add_subcommand("simulate", "Generate the synthetic reference city with ground truth");
  simulate->add_option("-o,--out", out, "Output directory")->required();
  simulate->add_option("--seed", seed, "Layout and noise seed");
  simulate->add_option("--miss-rate", noise.miss_rate, "Per-frame miss probability")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--max-consecutive-misses", noise.max_consecutive_misses, "Cap on a miss streak");
  simulate->add_option("--false-positive-rate", noise.false_positive_rate, "Blip start probability per frame")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--jitter", noise.box_jitter_px, "Box jitter sigma in pixels")->check(CLI::NonNegativeNumber);
  simulate->add_option("--flip", noise.attribute_flip_prob, "Attribute flip probability")->check(CLI::Range(0.0, 1.0));

  auto* serve = app.add_subcommand("serve", "Serve the review API over HTTP");
  serve->add_option("--store", store_flag, "SQLite store path (default ROADSAFE_STORE or ./roadsafe.db)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--registry", registry, "Vehicle registry file: `plate owner` per line")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (!opt.config_path.empty()) opt.config();  // reject a bad config before doing any work
    if (*ingest) return cmd_ingest(opt, dir, out, strict);
    if (*track) return cmd_track(opt, dir, out);
    if (*fuse) return cmd_fuse(opt, dir, out, persist, store_flag, run_id);
    if (*report) return cmd_report(metrics_files, store_flag, format, out);
    if (*eval) return cmd_eval(opt, det_path, gt_path, meta_path, cond_path, out);
    if (*simulate) return cmd_simulate(out, seed, noise);
    if (*serve) return cmd_serve(store_flag, host, port, registry);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
