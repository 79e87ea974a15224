#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roadsafe/evaluation.hpp"
#include "roadsafe/hungarian.hpp"

namespace roadsafe::testing {

// Minimum total cost over every injective row->column map (or column->row
// when there are more rows), summed in row order. Exponential; n <= 8.
double brute_force_min_cost(const CostMatrix& cost);

// Cost of an assignment summed in row order, matching brute_force_min_cost.
double row_order_cost(const CostMatrix& cost, const Assignment& a);

// Area under the monotone precision envelope, integrated with the midpoint
// rule over the partition of [0, 1] induced by the recall levels. The
// envelope is piecewise constant on that partition, so the rule is exact.
// Ranking is by descending confidence; inputs should have distinct
// confidences.
double ap_midpoint_oracle(std::span<const RankedFlag> flags, std::size_t n_gt);

// One-dimensional random-walk Kalman filter (x_k = x_{k-1} + w, z = x + v).
struct ScalarKalman {
  double x = 0;
  double p = 0;
  double q = 0;
  double r = 0;

  void predict() { p += q; }
  void update(double z) {
    const double k = p / (p + r);
    x += k * (z - x);
    p = (1 - k) * p;
  }
};

// Constant-velocity filter on one coordinate: state (x, v), x observed.
struct PositionKalman {
  double x = 0, v = 0;
  double pxx = 0, pxv = 0, pvv = 0;
  double qx = 0, qv = 0, r = 0;

  void predict() {
    x += v;
    const double nxx = pxx + 2 * pxv + pvv + qx;
    const double nxv = pxv + pvv;
    pxx = nxx;
    pxv = nxv;
    pvv += qv;
  }
  void update(double z) {
    const double s = pxx + r;
    const double kx = pxx / s;
    const double kv = pxv / s;
    const double innov = z - x;
    x += kx * innov;
    v += kv * innov;
    const double nxx = (1 - kx) * pxx;
    const double nxv = (1 - kx) * pxv;
    const double nvv = pvv - kv * pxv;
    pxx = nxx;
    pxv = nxv;
    pvv = nvv;
  }
};

}  // namespace roadsafe::testing
