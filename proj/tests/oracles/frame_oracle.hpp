#pragma once

// Ground-truth camera rigs as plain 4x4 matrices. Observations are derived by
// matrix inversion, so checks against them do not reuse the library's
// transform algebra.

#include <algorithm>
#include <cmath>
#include <random>

#include "fk_oracle.hpp"
#include "telephantom/calibration.hpp"

namespace oracle {

struct TruthRig {
  Mat4 base_fixed;
  Mat4 base_tag;
  Mat4 base_float;

  Mat4 fixed_tag() const { return base_fixed.inverse() * base_tag; }
  Mat4 float_tag() const { return base_float.inverse() * base_tag; }
};

inline Mat4 random_pose(std::mt19937_64& rng, double reach) {
  std::uniform_real_distribution<double> u(-reach, reach);
  return homogeneous(random_rotation(rng), Eigen::Vector3d(u(rng), u(rng), u(rng)));
}

inline TruthRig random_rig(std::mt19937_64& rng) {
  return {random_pose(rng, 1.5), random_pose(rng, 1.0), random_pose(rng, 1.5)};
}

inline telephantom::RigidTransform to_transform(const Mat4& m) {
  const Eigen::Matrix3d r = m.topLeftCorner<3, 3>();
  return telephantom::RigidTransform(Eigen::Quaterniond(r), m.topRightCorner<3, 1>());
}

/// Rotation angle between two rotation matrices. atan2 of the skew part and
/// the trace stays accurate near zero, where acos of the trace alone does not.
inline double rotation_error(const Mat4& a, const Mat4& b) {
  const Eigen::Matrix3d r = a.topLeftCorner<3, 3>().transpose() * b.topLeftCorner<3, 3>();
  const Eigen::Vector3d w(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return std::atan2(0.5 * w.norm(), 0.5 * (r.trace() - 1.0));
}

inline double translation_error(const Mat4& a, const Mat4& b) {
  return (a.topRightCorner<3, 1>() - b.topRightCorner<3, 1>()).norm();
}

}  // namespace oracle
