#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace roadsafe::testing {

double brute_force_min_cost(const CostMatrix& cost) {
  const auto rows = static_cast<std::size_t>(cost.rows());
  const auto cols = static_cast<std::size_t>(cost.cols());
  if (rows == 0 || cols == 0) return 0;
  double best = std::numeric_limits<double>::infinity();
  if (rows <= cols) {
    // Choose a column for every row: iterate permutations of the columns and
    // use the first `rows` entries.
    std::vector<std::size_t> perm(cols);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      double total = 0;
      for (std::size_t r = 0; r < rows; ++r) total += cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(perm[r]));
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Choose a row for every column, then sum in row order.
    std::vector<std::size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t c = 0; c < cols; ++c) pairs.emplace_back(perm[c], c);
      std::sort(pairs.begin(), pairs.end());
      double total = 0;
      for (const auto& [r, c] : pairs) total += cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

double row_order_cost(const CostMatrix& cost, const Assignment& a) {
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  double total = 0;
  for (const auto& [r, c] : sorted) total += cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return total;
}

double ap_midpoint_oracle(std::span<const RankedFlag> flags, std::size_t n_gt) {
  if (n_gt == 0) return 0;
  std::vector<RankedFlag> ranked(flags.begin(), flags.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedFlag& a, const RankedFlag& b) { return a.confidence > b.confidence; });

  // Operating points (recall, precision) after each ranked prediction.
  std::vector<std::pair<double, double>> points;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (ranked[k].true_positive) ++tp;
    points.emplace_back(static_cast<double>(tp) / static_cast<double>(n_gt),
                        static_cast<double>(tp) / static_cast<double>(k + 1));
  }
  auto envelope = [&points](double r) {
    double best = 0;
    for (const auto& [rec, prec] : points) {
      if (rec >= r) best = std::max(best, prec);
    }
    return best;
  };

  std::vector<double> knots{0.0, 1.0};
  for (const auto& p : points) knots.push_back(p.first);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  double area = 0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double width = knots[i] - knots[i - 1];
    area += width * envelope((knots[i] + knots[i - 1]) / 2);
  }
  return area;
}

}  // namespace roadsafe::testing
