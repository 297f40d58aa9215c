#pragma once

#include <vector>

#include "telephantom/kinematics.hpp"

namespace telephantom {

struct IkOptions {
  int max_iterations = 100;
  double damping = 0.01;           // lambda of the damped least-squares step
  double orientation_weight = 0.3; // meters per radian in the stacked error
  double position_tolerance = 1e-5;
  double orientation_tolerance = 1e-4;
  double max_step = 0.3;           // per-iteration cap on |dq|_inf, radians
};

struct IkResult {
  JointConfig q;
  double position_error = 0.0;
  double orientation_error = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Geometric Jacobian (6 x joint_count, linear rows first) of the frame of
/// `tip_joint`. Columns of joints outside the tip's ancestor chain are zero.
Eigen::MatrixXd frame_jacobian(const KinematicModel& model, const std::vector<RigidTransform>& frames,
                               int tip_joint);

/// Damped least-squares IK for the pose of `tip_joint`, moving only the joints
/// on the root-to-tip chain, starting from `seed`. Joints are kept within
/// limits every iteration. Best effort: unreachable targets return the closest
/// iterate with converged = false.
IkResult solve_ik(const KinematicModel& model, int tip_joint, const RigidTransform& target,
                  const JointConfig& seed, const IkOptions& options = {});

}  // namespace telephantom
