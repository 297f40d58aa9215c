#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "telephantom/rigid_transform.hpp"

namespace telephantom {

/// Parent index used for joints (and links) attached directly to the root frame.
inline constexpr int kRootFrame = -1;

/// Revolute joint. The joint frame is parent_frame * origin * Rot(axis, q).
struct JointSpec {
  std::string name;
  int parent = kRootFrame;
  RigidTransform origin;
  Vec3 axis = Vec3::UnitZ();
  double lower = 0.0;
  double upper = 0.0;
  double max_velocity = 1.0;
};

/// Swept sphere around the segment [a, b]. A zero-length segment is a sphere.
struct Capsule {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double radius = 0.0;
};

struct LinkSpec {
  std::string name;
  int joint = kRootFrame;  // owning joint frame, or kRootFrame
  Capsule capsule;         // expressed in the owning joint frame
  std::vector<int> mask;   // extra link indices never tested against this one
};

/// Immutable kinematic tree of revolute joints with capsule link geometry.
///
/// Joints may be listed in any order as long as parent references form a tree
/// hanging off the single root frame. Construction validates everything and
/// throws LoadError with the offending field path on failure.
///
/// Collision masking: on top of the explicit per-link masks, links are masked
/// against their neighbours in the link tree, i.e. links owned by the same
/// frame, and a link and the links on its nearest link-bearing ancestor frame.
class KinematicModel {
 public:
  KinematicModel() = default;
  KinematicModel(std::vector<JointSpec> joints, std::vector<LinkSpec> links,
                 std::string root_name = "base");

  std::size_t joint_count() const { return joints_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const std::vector<JointSpec>& joints() const { return joints_; }
  const std::vector<LinkSpec>& links() const { return links_; }
  const JointSpec& joint(std::size_t i) const { return joints_.at(i); }
  const LinkSpec& link(std::size_t i) const { return links_.at(i); }
  const std::string& root_name() const { return root_name_; }

  /// Joint indices such that every parent precedes its children.
  const std::vector<int>& topological_order() const { return order_; }

  int joint_index(const std::string& name) const;  // -1 when absent
  bool is_masked(std::size_t link_a, std::size_t link_b) const {
    return mask_[link_a * links_.size() + link_b] != 0;
  }
  /// True when `joint` is `ancestor` or lies in its subtree.
  bool in_subtree(int ancestor, int joint) const;

  Eigen::VectorXd lower_limits() const;
  Eigen::VectorXd upper_limits() const;
  bool within_limits(const JointConfig& q, double tol = 0.0) const;
  JointConfig clamp(const JointConfig& q) const;
  JointConfig zero_config() const { return JointConfig::Zero(static_cast<Eigen::Index>(joint_count())); }

 private:
  void validate_and_index();

  std::string root_name_ = "base";
  std::vector<JointSpec> joints_;
  std::vector<LinkSpec> links_;
  std::vector<int> order_;
  std::vector<unsigned char> mask_;
};

/// Hangs `child` below joint `parent_joint` of `parent`. Child joints and links
/// are appended after the parent's, child names get `prefix` prepended, child
/// root-attached joints get origin mount * origin, and child root links move
/// onto `parent_joint` with their capsules expressed through `mount`.
KinematicModel attach(const KinematicModel& parent, int parent_joint, const RigidTransform& mount,
                      const KinematicModel& child, const std::string& prefix = "");

/// One transform per joint frame, expressed in the root frame.
std::vector<RigidTransform> forward_kinematics(const KinematicModel& model, const JointConfig& q);

/// Pose of the frame a link is attached to: root identity or the joint frame.
inline const RigidTransform& owning_frame(const std::vector<RigidTransform>& frames, int joint) {
  static const RigidTransform kIdentity;
  return joint == kRootFrame ? kIdentity : frames[static_cast<std::size_t>(joint)];
}

Capsule transform_capsule(const RigidTransform& pose, const Capsule& capsule);

/// Link capsules in the root frame for configuration q.
std::vector<Capsule> world_capsules(const KinematicModel& model, const JointConfig& q);

/// Minimum distance between the closed segments [p0, p1] and [q0, q1].
double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

/// Segment-segment distance minus the radii sum; negative when the capsules overlap.
double capsule_distance(const Capsule& a, const Capsule& b);

struct LinkPair {
  std::size_t a;
  std::size_t b;
};

/// Every unmasked link pair whose capsules intersect (a < b).
std::vector<LinkPair> colliding_pairs(const KinematicModel& model, const JointConfig& q);

/// One label per link: true iff the link intersects any unmasked link.
std::vector<bool> check_self_collision(const KinematicModel& model, const JointConfig& q);

/// Cheaper early-exit form of the above.
bool in_self_collision(const KinematicModel& model, const JointConfig& q);

}  // namespace telephantom
