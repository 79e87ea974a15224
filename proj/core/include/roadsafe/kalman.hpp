#pragma once

#include <Eigen/Core>

#include "roadsafe/error.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

using StateVector = Eigen::Matrix<double, 7, 1>;
using StateCovariance = Eigen::Matrix<double, 7, 7>;
using MeasurementVector = Eigen::Matrix<double, 4, 1>;

// Constant-velocity box state [u, v, s, r, du, dv, ds]: box center, area,
// aspect ratio (w/h) and the velocities of the first three.
struct KalmanState {
  StateVector mean = StateVector::Zero();
  StateCovariance covariance = StateCovariance::Identity();
};

// Noise model. Defaults follow the usual SORT parameterisation; the scale
// factors multiply the process and measurement covariances.
struct KalmanModel {
  double process_noise_scale = 1.0;
  double measurement_noise_scale = 1.0;
  double min_area = 1.0;          // px^2
  double min_aspect_ratio = 0.01;

  StateCovariance process_noise() const;
  Eigen::Matrix4d measurement_noise() const;
  StateCovariance initial_covariance() const;
};

class InvalidMeasurement : public Error {
 public:
  using Error::Error;
};

MeasurementVector box_to_measurement(const BoundingBox& box);
BoundingBox state_to_box(const StateVector& mean);

KalmanState kalman_init(const BoundingBox& box, const KalmanModel& model = {});

// One constant-velocity step. Area is clamped to model.min_area (and its
// velocity zeroed) if the step would make it non-positive.
KalmanState kalman_predict(const KalmanState& state, const KalmanModel& model = {});

// Correction with a box measurement. Throws InvalidMeasurement for
// non-finite or degenerate boxes; the input state is never modified.
KalmanState kalman_update(const KalmanState& state, const BoundingBox& z, const KalmanModel& model = {});
KalmanState kalman_update(const KalmanState& state, const MeasurementVector& z, const KalmanModel& model = {});

}  // namespace roadsafe
