#include "telephantom/kinematics.hpp"

namespace telephantom {

std::vector<LinkPair> colliding_pairs(const KinematicModel& model, const JointConfig& q) {
  const auto caps = world_capsules(model, q);
  std::vector<LinkPair> out;
  for (std::size_t a = 0; a < caps.size(); ++a) {
    for (std::size_t b = a + 1; b < caps.size(); ++b) {
      if (model.is_masked(a, b)) continue;
      if (capsule_distance(caps[a], caps[b]) < 0.0) out.push_back({a, b});
    }
  }
  return out;
}

std::vector<bool> check_self_collision(const KinematicModel& model, const JointConfig& q) {
  std::vector<bool> labels(model.link_count(), false);
  for (const LinkPair& p : colliding_pairs(model, q)) {
    labels[p.a] = true;
    labels[p.b] = true;
  }
  return labels;
}

bool in_self_collision(const KinematicModel& model, const JointConfig& q) {
  const auto caps = world_capsules(model, q);
  for (std::size_t a = 0; a < caps.size(); ++a) {
    for (std::size_t b = a + 1; b < caps.size(); ++b) {
      if (!model.is_masked(a, b) && capsule_distance(caps[a], caps[b]) < 0.0) return true;
    }
  }
  return false;
}

}  // namespace telephantom
