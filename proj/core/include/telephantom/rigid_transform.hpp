#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace telephantom {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Joint angles in radians, one entry per joint of the model it belongs to.
using JointConfig = Eigen::VectorXd;

/// Proper rigid motion: rotation (unit quaternion) followed by translation in meters.
///
/// Naming convention used across the library: a transform called `a_to_b`
/// (written a→b in comments) is the pose of frame b expressed in frame a, so
/// `a_to_b * p_b` yields the same point in frame a and
/// `a_to_b * b_to_c == a_to_c`.
class RigidTransform {
 public:
  RigidTransform() : rotation_(Quat::Identity()), translation_(Vec3::Zero()) {}

  /// The quaternion is normalized on construction (unless already unit to rounding).
  RigidTransform(const Quat& rotation, const Vec3& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t) { return {Quat::Identity(), t}; }
  static RigidTransform from_rotation(const Quat& q) { return {q, Vec3::Zero()}; }
  static RigidTransform from_axis_angle(const Vec3& unit_axis, double angle);
  /// Expects a proper homogeneous matrix; the rotation block is re-orthonormalized.
  static RigidTransform from_matrix(const Mat4& m);

  const Quat& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }
  Mat4 matrix() const;

  RigidTransform operator*(const RigidTransform& rhs) const;
  Vec3 operator*(const Vec3& point) const { return rotation_ * point + translation_; }
  RigidTransform inverse() const;

  bool is_approx(const RigidTransform& other, double tol) const;

 private:
  Quat rotation_;
  Vec3 translation_;
};

inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) { return a * b; }
inline RigidTransform invert(const RigidTransform& a) { return a.inverse(); }

/// Geodesic angle in [0, pi] between two orientations.
double rotation_angle_between(const Quat& a, const Quat& b);

/// Rotation vector (axis * angle, angle in [0, pi]) of a unit quaternion, and its inverse.
Vec3 rotation_log(const Quat& q);
Quat rotation_exp(const Vec3& rotation_vector);

}  // namespace telephantom
