#pragma once

#include <Eigen/Dense>

namespace vartrack {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using VecX = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat24 = Eigen::Matrix<double, 2, 4>;
using Mat42 = Eigen::Matrix<double, 4, 2>;
using MatX = Eigen::MatrixXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// (A + A^T)/2; applied after every covariance update.
template <typename Derived>
auto symmetrize(const Eigen::MatrixBase<Derived>& m) {
  return ((m + m.transpose()) * 0.5).eval();
}

}  // namespace vartrack
