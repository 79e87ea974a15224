#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace roadsafe {

using CostMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Assignment = std::vector<std::pair<std::size_t, std::size_t>>;  // (row, col), sorted by row

// Minimum-cost assignment of cardinality min(rows, cols).
//
// Among all optimal matchings the lexicographically smallest (row, col)
// sequence is returned, so equal-cost alternatives resolve the same way on
// every run. Optimality of a candidate edge is judged on the dual reduced
// costs with a tolerance relative to the largest |cost|; integer-valued
// matrices are therefore solved exactly.
//
// Throws InvalidArgument if any cost is not finite. An empty matrix yields
// an empty assignment.
Assignment hungarian(const CostMatrix& cost);

double assignment_cost(const CostMatrix& cost, const Assignment& assignment);

}  // namespace roadsafe
