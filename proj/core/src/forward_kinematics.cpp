#include <string>

#include "telephantom/error.hpp"
#include "telephantom/kinematics.hpp"

namespace telephantom {

std::vector<RigidTransform> forward_kinematics(const KinematicModel& model, const JointConfig& q) {
  if (static_cast<std::size_t>(q.size()) != model.joint_count()) {
    throw DimensionError("forward_kinematics: expected " + std::to_string(model.joint_count()) +
                         " joint values, got " + std::to_string(q.size()));
  }
  std::vector<RigidTransform> frames(model.joint_count());
  for (int i : model.topological_order()) {
    const JointSpec& j = model.joint(static_cast<std::size_t>(i));
    const RigidTransform motion = RigidTransform::from_axis_angle(j.axis, q[i]);
    const RigidTransform local = j.origin * motion;
    frames[static_cast<std::size_t>(i)] =
        j.parent == kRootFrame ? local : frames[static_cast<std::size_t>(j.parent)] * local;
  }
  return frames;
}

Capsule transform_capsule(const RigidTransform& pose, const Capsule& capsule) {
  return {pose * capsule.a, pose * capsule.b, capsule.radius};
}

std::vector<Capsule> world_capsules(const KinematicModel& model, const JointConfig& q) {
  const auto frames = forward_kinematics(model, q);
  std::vector<Capsule> out;
  out.reserve(model.link_count());
  for (const LinkSpec& l : model.links()) {
    out.push_back(transform_capsule(owning_frame(frames, l.joint), l.capsule));
  }
  return out;
}

}  // namespace telephantom
