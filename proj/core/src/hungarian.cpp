#include "roadsafe/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roadsafe/error.hpp"

namespace roadsafe {
namespace {

struct DualSolution {
  std::vector<double> u;        // row potentials, 1-based
  std::vector<double> v;        // column potentials, 1-based
  std::vector<std::size_t> row_of;  // column -> row, 1-based, 0 = none
};

// Shortest augmenting path Hungarian method on a square matrix.
DualSolution solve_square(const CostMatrix& a) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  DualSolution d{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0),
                 std::vector<std::size_t>(n + 1, 0)};
  std::vector<std::size_t> way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    d.row_of[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = d.row_of[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - d.u[i0] - d.v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          d.u[d.row_of[j]] += delta;
          d.v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (d.row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      d.row_of[j0] = d.row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return d;
}

// Perfect matching on the graph of tight edges, refined to the
// lexicographically smallest one over the first `real_rows` rows.
class TightGraphRefiner {
 public:
  TightGraphRefiner(const CostMatrix& a, const DualSolution& d, double tol)
      : n_(static_cast<std::size_t>(a.rows())), tight_(n_ * n_), col_of_(n_), row_of_(n_), fixed_(n_, 0) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double reduced =
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - d.u[i + 1] - d.v[j + 1];
        tight_[i * n_ + j] = reduced <= tol;
      }
    }
    for (std::size_t j = 0; j < n_; ++j) {
      row_of_[j] = d.row_of[j + 1] - 1;
      col_of_[row_of_[j]] = j;
      tight_[row_of_[j] * n_ + j] = 1;  // matched edges are tight by construction
    }
  }

  void refine(std::size_t real_rows) {
    for (std::size_t i = 0; i < real_rows; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (!tight_[i * n_ + j] || fixed_[row_of_[j]]) continue;
        if (j == col_of_[i] || try_move(i, j)) break;
      }
      fixed_[i] = 1;
    }
  }

  std::size_t col_of(std::size_t row) const { return col_of_[row]; }

 private:
  // Reassigns row i to column j, re-matching the displaced row through an
  // alternating path that ends in i's old column. Rolls back on failure.
  bool try_move(std::size_t i, std::size_t j) {
    const auto saved_col = col_of_;
    const auto saved_row = row_of_;
    const std::size_t freed = col_of_[i];
    const std::size_t displaced = row_of_[j];
    col_of_[i] = j;
    row_of_[j] = i;
    visited_.assign(n_, 0);
    visited_[j] = 1;
    fixed_[i] = 1;
    const bool ok = augment(displaced, freed);
    fixed_[i] = 0;
    if (!ok) {
      col_of_ = saved_col;
      row_of_ = saved_row;
    }
    return ok;
  }

  bool augment(std::size_t row, std::size_t free_col) {
    for (std::size_t c = 0; c < n_; ++c) {
      if (!tight_[row * n_ + c] || visited_[c]) continue;
      if (c == free_col) {
        col_of_[row] = c;
        row_of_[c] = row;
        return true;
      }
      const std::size_t owner = row_of_[c];
      if (fixed_[owner]) continue;
      visited_[c] = 1;
      if (augment(owner, free_col)) {
        col_of_[row] = c;
        row_of_[c] = row;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<char> tight_;
  std::vector<std::size_t> col_of_;
  std::vector<std::size_t> row_of_;
  std::vector<char> fixed_;
  std::vector<char> visited_;
};

}  // namespace

Assignment hungarian(const CostMatrix& cost) {
  const auto rows = static_cast<std::size_t>(cost.rows());
  const auto cols = static_cast<std::size_t>(cost.cols());
  if (rows == 0 || cols == 0) return {};
  if (!cost.allFinite()) throw InvalidArgument("assignment costs must be finite");

  const std::size_t n = std::max(rows, cols);
  CostMatrix square = CostMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  square.topLeftCorner(cost.rows(), cost.cols()) = cost;

  const DualSolution duals = solve_square(square);
  const double tol = 1e-9 * std::max(1.0, cost.cwiseAbs().maxCoeff());
  TightGraphRefiner refiner(square, duals, tol);
  refiner.refine(rows);

  Assignment out;
  out.reserve(std::min(rows, cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t j = refiner.col_of(i);
    if (j < cols) out.emplace_back(i, j);
  }
  return out;
}

double assignment_cost(const CostMatrix& cost, const Assignment& assignment) {
  double total = 0;
  for (const auto& [r, c] : assignment) total += cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return total;
}

}  // namespace roadsafe
