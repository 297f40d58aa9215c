#pragma once

// Small hand-written models shared by unit and acceptance tests.

#include "telephantom/kinematics.hpp"

namespace oracle {

/// Planar three-segment finger bending about z. Each segment is 0.05 m long
/// with radius 0.008; segment 0 and 2 can fold into each other.
inline telephantom::KinematicModel toy_finger() {
  using telephantom::JointSpec;
  using telephantom::LinkSpec;
  using telephantom::RigidTransform;
  using telephantom::Vec3;
  std::vector<JointSpec> joints{
      {"mcp", telephantom::kRootFrame, RigidTransform::identity(), Vec3::UnitZ(), -0.2, 2.6, 2.0},
      {"pip", 0, RigidTransform::from_translation(Vec3(0.05, 0, 0)), Vec3::UnitZ(), -0.2, 2.6, 2.0},
      {"dip", 1, RigidTransform::from_translation(Vec3(0.05, 0, 0)), Vec3::UnitZ(), -0.2, 2.6, 2.0},
  };
  std::vector<LinkSpec> links{
      {"proximal", 0, {Vec3::Zero(), Vec3(0.05, 0, 0), 0.008}, {}},
      {"middle", 1, {Vec3::Zero(), Vec3(0.05, 0, 0), 0.008}, {}},
      {"distal", 2, {Vec3::Zero(), Vec3(0.05, 0, 0), 0.008}, {}},
  };
  return telephantom::KinematicModel(std::move(joints), std::move(links), "palm");
}

}  // namespace oracle
