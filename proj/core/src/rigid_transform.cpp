#include "telephantom/rigid_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace telephantom {

RigidTransform::RigidTransform(const Quat& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  // Leave already-unit quaternions bit-for-bit untouched so serialized poses round-trip exactly.
  if (std::abs(rotation_.squaredNorm() - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
    rotation_.normalize();
  }
}

RigidTransform RigidTransform::from_axis_angle(const Vec3& unit_axis, double angle) {
  return from_rotation(Quat(Eigen::AngleAxisd(angle, unit_axis)));
}

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
  Eigen::JacobiSVD<Mat3> svd(m.topLeftCorner<3, 3>(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Mat3 u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return {Quat(r), m.topRightCorner<3, 1>()};
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_matrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  return {rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_};
}

RigidTransform RigidTransform::inverse() const {
  const Quat inv = rotation_.conjugate();
  return {inv, -(inv * translation_)};
}

bool RigidTransform::is_approx(const RigidTransform& other, double tol) const {
  return (translation_ - other.translation_).norm() <= tol &&
         rotation_angle_between(rotation_, other.rotation_) <= tol;
}

double rotation_angle_between(const Quat& a, const Quat& b) {
  // atan2 form stays accurate for tiny angles where acos(|dot|) loses digits.
  const Quat d = a.conjugate() * b;
  const double s = d.vec().norm();
  return 2.0 * std::atan2(s, std::abs(d.w()));
}

Vec3 rotation_log(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0) q.coeffs() *= -1.0;
  const double s = q.vec().norm();
  if (s < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(s, q.w());
  return q.vec() * (angle / s);
}

Quat rotation_exp(const Vec3& v) {
  const double angle = v.norm();
  if (angle < 1e-12) {
    return Quat(1.0, 0.5 * v.x(), 0.5 * v.y(), 0.5 * v.z()).normalized();
  }
  return Quat(Eigen::AngleAxisd(angle, v / angle));
}

}  // namespace telephantom
