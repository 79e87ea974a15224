#include "roadsafe/kalman.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace roadsafe {
namespace {

using MeasurementMatrix = Eigen::Matrix<double, 4, 7>;

StateCovariance transition() {
  StateCovariance f = StateCovariance::Identity();
  f(0, 4) = 1;
  f(1, 5) = 1;
  f(2, 6) = 1;
  return f;
}

MeasurementMatrix observation() {
  MeasurementMatrix h = MeasurementMatrix::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1;
  return h;
}

void symmetrize(StateCovariance& p) { p = (0.5 * (p + p.transpose())).eval(); }

void clamp_shape(StateVector& x, const KalmanModel& model) {
  if (!(x(2) > model.min_area)) {
    x(2) = model.min_area;
    x(6) = 0;
  }
  if (!(x(3) > model.min_aspect_ratio)) x(3) = model.min_aspect_ratio;
}

}  // namespace

StateCovariance KalmanModel::process_noise() const {
  StateCovariance q = StateCovariance::Identity();
  q.diagonal() << 1, 1, 1, 1, 0.01, 0.01, 0.0001;
  return q * process_noise_scale;
}

Eigen::Matrix4d KalmanModel::measurement_noise() const {
  Eigen::Matrix4d r = Eigen::Matrix4d::Identity();
  r.diagonal() << 1, 1, 10, 10;
  return r * measurement_noise_scale;
}

StateCovariance KalmanModel::initial_covariance() const {
  StateCovariance p = StateCovariance::Identity();
  p.diagonal() << 10, 10, 10, 10, 1e4, 1e4, 1e4;
  return p;
}

MeasurementVector box_to_measurement(const BoundingBox& box) {
  MeasurementVector z;
  z << box.center_x(), box.center_y(), box.w * box.h, box.w / box.h;
  return z;
}

BoundingBox state_to_box(const StateVector& mean) {
  const double s = mean(2) > 0 ? mean(2) : 0;
  const double r = mean(3) > 0 ? mean(3) : 0;
  const double w = std::sqrt(s * r);
  const double h = w > 0 ? s / w : 0;
  return {mean(0) - w / 2, mean(1) - h / 2, w, h};
}

KalmanState kalman_init(const BoundingBox& box, const KalmanModel& model) {
  if (!(box.w > 0) || !(box.h > 0) || !std::isfinite(box.x) || !std::isfinite(box.y)) {
    throw InvalidMeasurement("cannot initialise a track from a degenerate box");
  }
  KalmanState s;
  s.mean.setZero();
  s.mean.head<4>() = box_to_measurement(box);
  clamp_shape(s.mean, model);
  s.covariance = model.initial_covariance();
  return s;
}

KalmanState kalman_predict(const KalmanState& state, const KalmanModel& model) {
  static const StateCovariance f = transition();
  KalmanState out;
  out.mean = f * state.mean;
  out.covariance = f * state.covariance * f.transpose() + model.process_noise();
  symmetrize(out.covariance);
  clamp_shape(out.mean, model);
  return out;
}

KalmanState kalman_update(const KalmanState& state, const MeasurementVector& z, const KalmanModel& model) {
  if (!z.allFinite()) throw InvalidMeasurement("non-finite measurement");
  static const MeasurementMatrix h = observation();
  const Eigen::Matrix4d r = model.measurement_noise();

  const MeasurementVector innovation = z - h * state.mean;
  const Eigen::Matrix4d s = h * state.covariance * h.transpose() + r;
  // K = P H^T S^-1, computed as (S^-1 H P)^T with S symmetric.
  const Eigen::Matrix<double, 7, 4> gain = s.ldlt().solve(h * state.covariance).transpose();

  KalmanState out;
  out.mean = state.mean + gain * innovation;
  // Joseph form keeps the posterior symmetric positive semi-definite.
  const StateCovariance i_kh = StateCovariance::Identity() - gain * h;
  out.covariance = i_kh * state.covariance * i_kh.transpose() + gain * r * gain.transpose();
  symmetrize(out.covariance);
  clamp_shape(out.mean, model);
  return out;
}

KalmanState kalman_update(const KalmanState& state, const BoundingBox& z, const KalmanModel& model) {
  if (!std::isfinite(z.x) || !std::isfinite(z.y) || !std::isfinite(z.w) || !std::isfinite(z.h)) {
    throw InvalidMeasurement("non-finite measurement");
  }
  if (!(z.w > 0) || !(z.h > 0)) throw InvalidMeasurement("measurement box has non-positive size");
  return kalman_update(state, box_to_measurement(z), model);
}

}  // namespace roadsafe
