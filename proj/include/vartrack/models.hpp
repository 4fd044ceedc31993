#pragma once

#include <vector>

#include "vartrack/linalg.hpp"

namespace vartrack {

// Constant-velocity motion for one target; state is [x1, vx1, x2, vx2].
struct MotionModel {
  double tau = 1.0;
  double sigma = 1.0;
  Mat4 F = Mat4::Identity();
  Mat4 Q = Mat4::Zero();
};

/// F, Q of the CV model for time interval tau and noise intensity sigma.
MotionModel build_cv_model(double tau, double sigma);

struct GaussianBelief {
  Vec4 mean = Vec4::Zero();
  Mat4 cov = Mat4::Zero();
};

/// One-step prediction: mean' = F mean, cov' = F cov F^T + Q (symmetrized).
GaussianBelief predict(const GaussianBelief& belief, const MotionModel& model);

struct Rect {
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Zero();

  double volume() const { return (hi.x() - lo.x()) * (hi.y() - lo.y()); }
  bool contains(const Vec2& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

/// Position-selection observation matrix [[1,0,0,0],[0,0,1,0]].
Mat24 position_observation();

// Per-sensor NHPP measurement model. rates(0) is the clutter rate, rates(k)
// the rate of target k; noise[k-1] is that target's measurement covariance.
struct SensorModel {
  int sensor_id = 0;
  VecX rates;
  std::vector<Mat2> noise;
  Rect region;
  Mat24 H = position_observation();

  int num_targets() const { return static_cast<int>(noise.size()); }
  double clutter_rate() const { return rates(0); }
  double rate_sum() const { return rates.sum(); }
  double volume() const { return region.volume(); }
};

/// Throws std::invalid_argument if rates/noise/region violate model assumptions.
void validate(const SensorModel& sensor);

struct GroundTruthState {
  int steps = 0;
  int targets = 0;
  std::vector<Vec4> states;  // row-major [step][target]

  const Vec4& at(int step, int target) const {
    return states[static_cast<std::size_t>(step) * targets + target];
  }
  Vec4& at(int step, int target) {
    return states[static_cast<std::size_t>(step) * targets + target];
  }
};

/// log N(y; mean, cov) for a 2-D Gaussian; throws on non-PD covariance.
double gaussian_log_density(const Vec2& y, const Vec2& mean, const Mat2& cov);
double gaussian_density(const Vec2& y, const Vec2& mean, const Mat2& cov);

}  // namespace vartrack
