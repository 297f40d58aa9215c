#include "telephantom/inverse_kinematics.hpp"

#include <Eigen/Dense>
#include <string>

#include "telephantom/error.hpp"

namespace telephantom {

Eigen::MatrixXd frame_jacobian(const KinematicModel& model, const std::vector<RigidTransform>& frames,
                               int tip_joint) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(6, static_cast<Eigen::Index>(model.joint_count()));
  const Vec3 tip = frames[static_cast<std::size_t>(tip_joint)].translation();
  for (int j = tip_joint; j != kRootFrame; j = model.joint(static_cast<std::size_t>(j)).parent) {
    const RigidTransform& f = frames[static_cast<std::size_t>(j)];
    const Vec3 axis = f.rotation() * model.joint(static_cast<std::size_t>(j)).axis;
    jac.block<3, 1>(0, j) = axis.cross(tip - f.translation());
    jac.block<3, 1>(3, j) = axis;
  }
  return jac;
}

IkResult solve_ik(const KinematicModel& model, int tip_joint, const RigidTransform& target,
                  const JointConfig& seed, const IkOptions& options) {
  if (tip_joint < 0 || tip_joint >= static_cast<int>(model.joint_count())) {
    throw DimensionError("solve_ik: tip joint " + std::to_string(tip_joint) + " out of range");
  }
  IkResult result;
  result.q = model.clamp(seed);
  const double w = options.orientation_weight;
  for (int it = 0;; ++it) {
    const auto frames = forward_kinematics(model, result.q);
    const RigidTransform& tip = frames[static_cast<std::size_t>(tip_joint)];
    const Vec3 dp = target.translation() - tip.translation();
    const Vec3 dr = rotation_log(target.rotation() * tip.rotation().conjugate());
    result.position_error = dp.norm();
    result.orientation_error = dr.norm();
    result.iterations = it;
    if (result.position_error <= options.position_tolerance &&
        result.orientation_error <= options.orientation_tolerance) {
      result.converged = true;
      return result;
    }
    if (it >= options.max_iterations) return result;

    Eigen::Matrix<double, 6, 1> err;
    err << dp, w * dr;
    Eigen::MatrixXd jac = frame_jacobian(model, frames, tip_joint);
    jac.bottomRows<3>() *= w;
    const Eigen::Matrix<double, 6, 6> jjt =
        jac * jac.transpose() + options.damping * options.damping * Eigen::Matrix<double, 6, 6>::Identity();
    Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(err);
    const double peak = dq.cwiseAbs().maxCoeff();
    if (peak > options.max_step) dq *= options.max_step / peak;
    result.q = model.clamp(result.q + dq);
  }
}

}  // namespace telephantom
