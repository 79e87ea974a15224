#include "roadsafe/evaluation.hpp"

#include <cstdio>
#include <ostream>

namespace roadsafe {
namespace {

std::string cell_text(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

}  // namespace

std::vector<std::size_t> condition_columns(const ConditionLabel& label) {
  if (label.time_of_day == TimeOfDay::Unlabeled) return {};
  std::vector<std::size_t> cols;
  cols.push_back(static_cast<std::size_t>(label.time_of_day));  // Morning, Noon, Evening
  cols.push_back(3 + static_cast<std::size_t>(label.traffic));
  switch (label.road_type) {
    case RoadType::Bridge: cols.push_back(6); break;
    case RoadType::Narrow: cols.push_back(7); break;
    case RoadType::Standard: cols.push_back(8); break;
    case RoadType::Highway: cols.push_back(9); break;
  }
  cols.push_back(10 + static_cast<std::size_t>(label.damage));
  return cols;
}

StratifiedReport stratify(std::span<const FrameEvaluation> frames, const ConditionTable& conditions, double fps,
                          std::span<const EvaluationTask> tasks) {
  std::array<std::vector<const FrameEvaluation*>, kConditionColumns> columns;
  std::vector<const FrameEvaluation*> all;
  all.reserve(frames.size());
  for (const auto& f : frames) {
    all.push_back(&f);
    auto label = conditions.label_for_frame(f.frame, fps);
    if (!label) continue;
    for (std::size_t c : condition_columns(*label)) columns[c].push_back(&f);
  }

  StratifiedReport report;
  for (const auto& task : tasks) {
    report.tasks.push_back(task.name);
    ConditionRow row;
    for (std::size_t c = 0; c < kConditionColumns; ++c) row[c] = task_map(columns[c], task);
    report.cells.push_back(row);
    report.pooled.push_back(task_map(all, task));
  }
  for (std::size_t c = 0; c < kConditionColumns; ++c) {
    double sum = 0;
    int n = 0;
    for (const auto& row : report.cells) {
      if (!row[c]) continue;
      sum += *row[c];
      ++n;
    }
    if (n > 0) report.overall[c] = sum / n;
  }
  return report;
}

void emit_stratified_table(std::ostream& out, const StratifiedReport& report) {
  out << "group";
  for (const auto& [group, width] : kConditionGroups) {
    for (std::size_t i = 0; i < width; ++i) out << ',' << group;
  }
  out << "\ntask";
  for (auto name : kConditionColumnNames) out << ',' << name;
  out << '\n';
  auto row_out = [&out](std::string_view name, const ConditionRow& row) {
    out << name;
    for (const auto& v : row) out << ',' << cell_text(v);
    out << '\n';
  };
  for (std::size_t t = 0; t < report.tasks.size(); ++t) row_out(report.tasks[t], report.cells[t]);
  row_out("Overall", report.overall);
}

}  // namespace roadsafe
