#include "vartrack/models.hpp"

#include <cmath>
#include <stdexcept>

namespace vartrack {

MotionModel build_cv_model(double tau, double sigma) {
  if (!(tau > 0.0)) throw std::invalid_argument("build_cv_model: tau must be positive");
  if (sigma < 0.0) throw std::invalid_argument("build_cv_model: sigma must be non-negative");

  Mat2 f;
  f << 1.0, tau, 0.0, 1.0;
  Mat2 q;
  q << tau * tau * tau / 3.0, tau * tau / 2.0, tau * tau / 2.0, tau;
  q *= sigma * sigma;

  MotionModel m;
  m.tau = tau;
  m.sigma = sigma;
  m.F.setZero();
  m.F.block<2, 2>(0, 0) = f;
  m.F.block<2, 2>(2, 2) = f;
  m.Q.setZero();
  m.Q.block<2, 2>(0, 0) = q;
  m.Q.block<2, 2>(2, 2) = q;
  return m;
}

GaussianBelief predict(const GaussianBelief& belief, const MotionModel& model) {
  GaussianBelief out;
  out.mean = model.F * belief.mean;
  out.cov = symmetrize(model.F * belief.cov * model.F.transpose() + model.Q);
  return out;
}

Mat24 position_observation() {
  Mat24 h;
  h << 1, 0, 0, 0, 0, 0, 1, 0;
  return h;
}

void validate(const SensorModel& sensor) {
  if (sensor.rates.size() != sensor.num_targets() + 1)
    throw std::invalid_argument("SensorModel: rates must have K+1 entries");
  if ((sensor.rates.array() < 0.0).any())
    throw std::invalid_argument("SensorModel: rates must be non-negative");
  if (!(sensor.rate_sum() > 0.0))
    throw std::invalid_argument("SensorModel: total rate must be positive");
  if (!(sensor.volume() > 0.0))
    throw std::invalid_argument("SensorModel: region must have positive volume");
  for (const Mat2& r : sensor.noise) {
    Eigen::LLT<Mat2> llt(r);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("SensorModel: noise covariance must be positive definite");
  }
}

double gaussian_log_density(const Vec2& y, const Vec2& mean, const Mat2& cov) {
  Eigen::LLT<Mat2> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gaussian_log_density: covariance not positive definite");
  const Mat2 l = llt.matrixL();
  const Vec2 z = llt.matrixL().solve(y - mean);
  const double log_det = 2.0 * (std::log(l(0, 0)) + std::log(l(1, 1)));
  return -0.5 * (2.0 * std::log(kTwoPi) + log_det + z.squaredNorm());
}

double gaussian_density(const Vec2& y, const Vec2& mean, const Mat2& cov) {
  return std::exp(gaussian_log_density(y, mean, cov));
}

}  // namespace vartrack
