#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsafe/ingest.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

struct GroundTruthBox {
  FrameIndex frame = 0;
  ObjectClass cls = ObjectClass::Pothole;
  BoundingBox box;
  bool matched = false;
};

struct ScoredBox {
  BoundingBox box;
  double confidence = 0;
};

// A prediction's confidence and whether it matched a ground-truth box.
struct RankedFlag {
  double confidence = 0;
  bool true_positive = false;
};

// Greedy matching for one (frame, class): predictions in descending
// confidence (ties by input order) each claim the unmatched ground truth
// of highest IoU >= iou_threshold. Returns one flag per prediction in input
// order and marks claimed ground truth as matched.
std::vector<bool> match(std::span<const ScoredBox> predictions, std::span<GroundTruthBox> ground_truth,
                        double iou_threshold = 0.5);

// All-points interpolated average precision: area under the precision-recall
// curve after replacing precision with its running maximum from the right.
// Flags may be in any order; they are ranked by descending confidence
// (stable). With n_gt == 0 the result is 0 if any prediction exists and
// nullopt otherwise.
std::optional<double> average_precision(std::span<const RankedFlag> flags, std::size_t n_gt);

struct PrecisionRecall {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  bool precision_undefined = false;  // no prediction passed the threshold
};

// Precision, recall and F1 over predictions with confidence >= conf_threshold.
PrecisionRecall prf1(std::span<const RankedFlag> flags, std::size_t n_gt, double conf_threshold = 0.5);

// ---- Dataset-level evaluation ----

// Ground-truth lines `frame class x y w h`.
std::vector<GroundTruthBox> parse_ground_truth(std::istream& in);
void emit_ground_truth(std::ostream& out, std::span<const GroundTruthBox> boxes);

// Matching result for one (frame, class) cell.
struct FrameEvaluation {
  FrameIndex frame = 0;
  ObjectClass cls = ObjectClass::Pothole;
  std::vector<RankedFlag> flags;
  std::size_t n_gt = 0;
};

// Matches predictions against ground truth per (frame, class). Lane-marking
// records are ignored. Output is ordered by (frame, class).
std::vector<FrameEvaluation> evaluate_frames(std::span<const DetectionRecord> predictions,
                                             std::span<const GroundTruthBox> ground_truth, double iou_threshold = 0.5);

struct EvaluationTask {
  std::string name;
  std::vector<ObjectClass> classes;
};

// Street lights, traffic signs, traffic participants (riders and
// motorcycles), helmet violations, potholes.
std::vector<EvaluationTask> default_tasks();

struct TaskScore {
  std::string task;
  PrecisionRecall prf;
  std::optional<double> map50;  // mean AP over the task's classes that have data
};

// Precision/recall/F1 pooled over each task's classes, plus mAP@0.5.
std::vector<TaskScore> score_tasks(std::span<const FrameEvaluation> frames, std::span<const EvaluationTask> tasks,
                                   double conf_threshold = 0.5);

// Mean AP of a task over a set of frame cells; nullopt when none of the
// task's classes has ground truth there.
std::optional<double> task_map(std::span<const FrameEvaluation* const> cells, const EvaluationTask& task);

// `task,precision,recall,f1,map50`
void emit_detection_table(std::ostream& out, std::span<const TaskScore> scores);

// ---- Condition-stratified evaluation ----

inline constexpr std::size_t kConditionColumns = 13;
inline constexpr std::array<std::string_view, kConditionColumns> kConditionColumnNames = {
    "Morning", "Afternoon", "Evening",  "Sparse",  "Moderate", "Dense", "Bridge",
    "Narrow",  "Standard",  "Highway", "Low",     "Medium",   "High",
};
// Column groups: Time 3, Traffic Density 3, Road Type 4, Road Damage 3.
inline constexpr std::array<std::pair<std::string_view, std::size_t>, 4> kConditionGroups = {{
    {"Time", 3}, {"Traffic Density", 3}, {"Road Type", 4}, {"Road Damage", 3}}};

// Columns a label contributes to; empty for unlabeled capture times.
std::vector<std::size_t> condition_columns(const ConditionLabel& label);

using ConditionRow = std::array<std::optional<double>, kConditionColumns>;

struct StratifiedReport {
  std::vector<std::string> tasks;
  std::vector<ConditionRow> cells;          // per task; absent where the cell has no ground truth
  ConditionRow overall;                     // unweighted mean over tasks with a value
  std::vector<std::optional<double>> pooled;  // per task, over every evaluated frame
};

// Pools each sub-category's frames and computes the per-task mAP there.
// Frames without a condition label, or captured outside the labelled hours,
// only enter the pooled column.
StratifiedReport stratify(std::span<const FrameEvaluation> frames, const ConditionTable& conditions, double fps,
                          std::span<const EvaluationTask> tasks);

// Two header rows (condition group, then column name), one row per task and
// an "Overall" row; empty cells have no ground truth.
void emit_stratified_table(std::ostream& out, const StratifiedReport& report);

}  // namespace roadsafe
