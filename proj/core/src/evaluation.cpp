#include "roadsafe/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "roadsafe/error.hpp"
#include "roadsafe/geometry.hpp"

namespace roadsafe {
namespace {

std::vector<std::size_t> rank_by_confidence(std::span<const double> confidence) {
  std::vector<std::size_t> order(confidence.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return confidence[a] > confidence[b]; });
  return order;
}

std::string two_decimals(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

}  // namespace

std::vector<bool> match(std::span<const ScoredBox> predictions, std::span<GroundTruthBox> ground_truth,
                        double iou_threshold) {
  std::vector<double> conf;
  conf.reserve(predictions.size());
  for (const auto& p : predictions) conf.push_back(p.confidence);

  std::vector<bool> flags(predictions.size(), false);
  for (std::size_t i : rank_by_confidence(conf)) {
    std::optional<std::size_t> best;
    double best_iou = 0;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (ground_truth[g].matched) continue;
      const double o = iou(predictions[i].box, ground_truth[g].box);
      if (o >= iou_threshold && (!best || o > best_iou)) {
        best = g;
        best_iou = o;
      }
    }
    if (best) {
      ground_truth[*best].matched = true;
      flags[i] = true;
    }
  }
  return flags;
}

std::optional<double> average_precision(std::span<const RankedFlag> flags, std::size_t n_gt) {
  if (n_gt == 0) {
    if (flags.empty()) return std::nullopt;
    return 0.0;
  }
  std::vector<double> conf;
  conf.reserve(flags.size());
  for (const auto& f : flags) conf.push_back(f.confidence);
  const auto order = rank_by_confidence(conf);

  std::vector<double> precision(order.size());
  std::vector<double> recall(order.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (flags[order[k]].true_positive) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    recall[k] = static_cast<double>(tp) / static_cast<double>(n_gt);
  }
  for (std::size_t k = order.size(); k-- > 1;) precision[k - 1] = std::max(precision[k - 1], precision[k]);

  double ap = 0;
  double prev_recall = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    ap += (recall[k] - prev_recall) * precision[k];
    prev_recall = recall[k];
  }
  return std::clamp(ap, 0.0, 1.0);
}

PrecisionRecall prf1(std::span<const RankedFlag> flags, std::size_t n_gt, double conf_threshold) {
  std::size_t predicted = 0;
  std::size_t tp = 0;
  for (const auto& f : flags) {
    if (f.confidence < conf_threshold) continue;
    ++predicted;
    if (f.true_positive) ++tp;
  }
  PrecisionRecall out;
  if (predicted == 0) {
    out.precision_undefined = true;
  } else {
    out.precision = static_cast<double>(tp) / static_cast<double>(predicted);
  }
  if (n_gt > 0) out.recall = static_cast<double>(tp) / static_cast<double>(n_gt);
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0 ? 2 * out.precision * out.recall / sum : 0.0;
  return out;
}

std::vector<GroundTruthBox> parse_ground_truth(std::istream& in) {
  if (!in.good() && !in.eof()) throw IngestError("ground-truth stream is not readable");
  std::vector<GroundTruthBox> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    GroundTruthBox g;
    std::string cls;
    if (!(ls >> g.frame >> cls >> g.box.x >> g.box.y >> g.box.w >> g.box.h)) {
      throw IngestError("ground truth line " + std::to_string(number) + ": expected `frame class x y w h`");
    }
    auto c = parse_object_class(cls);
    if (!c) throw IngestError("ground truth line " + std::to_string(number) + ": unknown class '" + cls + "'");
    g.cls = *c;
    if (!(g.box.w > 0) || !(g.box.h > 0)) {
      throw IngestError("ground truth line " + std::to_string(number) + ": non-positive box size");
    }
    out.push_back(g);
  }
  if (in.bad()) throw IngestError("read error on ground-truth stream");
  return out;
}

void emit_ground_truth(std::ostream& out, std::span<const GroundTruthBox> boxes) {
  for (const auto& g : boxes) {
    out << g.frame << ' ' << to_string(g.cls) << ' ' << format_double(g.box.x) << ' ' << format_double(g.box.y)
        << ' ' << format_double(g.box.w) << ' ' << format_double(g.box.h) << '\n';
  }
}

std::vector<FrameEvaluation> evaluate_frames(std::span<const DetectionRecord> predictions,
                                             std::span<const GroundTruthBox> ground_truth, double iou_threshold) {
  using Key = std::pair<FrameIndex, ObjectClass>;
  std::map<Key, std::pair<std::vector<ScoredBox>, std::vector<GroundTruthBox>>> cells;
  for (const auto& p : predictions) {
    if (p.cls == ObjectClass::LaneMarking) continue;
    cells[{p.frame, p.cls}].first.push_back({p.box, p.confidence});
  }
  for (const auto& g : ground_truth) {
    if (g.cls == ObjectClass::LaneMarking) continue;
    auto copy = g;
    copy.matched = false;
    cells[{g.frame, g.cls}].second.push_back(copy);
  }

  std::vector<FrameEvaluation> out;
  out.reserve(cells.size());
  for (auto& [key, cell] : cells) {
    auto& [preds, gts] = cell;
    const auto flags = match(preds, gts, iou_threshold);
    FrameEvaluation fe;
    fe.frame = key.first;
    fe.cls = key.second;
    fe.n_gt = gts.size();
    fe.flags.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) fe.flags.push_back({preds[i].confidence, flags[i]});
    out.push_back(std::move(fe));
  }
  return out;
}

std::vector<EvaluationTask> default_tasks() {
  return {
      {"Street Lights", {ObjectClass::StreetLight}},
      {"Traffic Signs", {ObjectClass::TrafficSign}},
      {"Traffic Participants", {ObjectClass::Rider, ObjectClass::Motorcycle}},
      {"Helmet Violations", {ObjectClass::Helmet}},
      {"Potholes", {ObjectClass::Pothole}},
  };
}

std::optional<double> task_map(std::span<const FrameEvaluation* const> cells, const EvaluationTask& task) {
  double sum = 0;
  int n = 0;
  for (ObjectClass cls : task.classes) {
    std::vector<RankedFlag> flags;
    std::size_t n_gt = 0;
    for (const auto* c : cells) {
      if (c->cls != cls) continue;
      flags.insert(flags.end(), c->flags.begin(), c->flags.end());
      n_gt += c->n_gt;
    }
    if (n_gt == 0) continue;
    sum += *average_precision(flags, n_gt);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::vector<TaskScore> score_tasks(std::span<const FrameEvaluation> frames, std::span<const EvaluationTask> tasks,
                                   double conf_threshold) {
  std::vector<const FrameEvaluation*> all;
  all.reserve(frames.size());
  for (const auto& f : frames) all.push_back(&f);

  std::vector<TaskScore> out;
  for (const auto& task : tasks) {
    std::vector<RankedFlag> flags;
    std::size_t n_gt = 0;
    for (const auto& f : frames) {
      if (std::find(task.classes.begin(), task.classes.end(), f.cls) == task.classes.end()) continue;
      flags.insert(flags.end(), f.flags.begin(), f.flags.end());
      n_gt += f.n_gt;
    }
    out.push_back({task.name, prf1(flags, n_gt, conf_threshold), task_map(all, task)});
  }
  return out;
}

void emit_detection_table(std::ostream& out, std::span<const TaskScore> scores) {
  out << "task,precision,recall,f1,map50\n";
  for (const auto& s : scores) {
    out << s.task << ',' << two_decimals(s.prf.precision) << ',' << two_decimals(s.prf.recall) << ','
        << two_decimals(s.prf.f1) << ',' << two_decimals(s.map50) << '\n';
  }
}

}  // namespace roadsafe
