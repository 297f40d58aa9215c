#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "telephantom/error.hpp"
#include "telephantom/kinematics.hpp"

namespace telephantom {
namespace {

std::string joint_field(std::size_t i, const char* field) {
  return "joints[" + std::to_string(i) + "]." + field;
}

std::string link_field(std::size_t i, const char* field) {
  return "links[" + std::to_string(i) + "]." + field;
}

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

KinematicModel::KinematicModel(std::vector<JointSpec> joints, std::vector<LinkSpec> links,
                               std::string root_name)
    : root_name_(std::move(root_name)), joints_(std::move(joints)), links_(std::move(links)) {
  validate_and_index();
}

void KinematicModel::validate_and_index() {
  const int n = static_cast<int>(joints_.size());
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const JointSpec& j = joints_[i];
    if (j.parent < kRootFrame || j.parent >= n) {
      throw LoadError(joint_field(i, "parent") + ": index " + std::to_string(j.parent) + " out of range");
    }
    if (j.parent == static_cast<int>(i)) {
      throw LoadError(joint_field(i, "parent") + ": joint is its own parent (cycle)");
    }
    if (!finite(j.axis) || std::abs(j.axis.norm() - 1.0) > 1e-9) {
      throw LoadError(joint_field(i, "axis") + ": must be a unit vector");
    }
    if (!std::isfinite(j.lower) || !std::isfinite(j.upper) || !(j.lower < j.upper)) {
      throw LoadError(joint_field(i, "lower") + ": limits must satisfy lower < upper");
    }
    if (!std::isfinite(j.max_velocity) || j.max_velocity <= 0.0) {
      throw LoadError(joint_field(i, "max_velocity") + ": must be positive");
    }
    if (!finite(j.origin.translation()) || !j.origin.rotation().coeffs().allFinite()) {
      throw LoadError(joint_field(i, "origin") + ": non-finite transform");
    }
  }

  // Depth-first topological order; a revisit of an in-progress node is a cycle.
  std::vector<std::vector<int>> children(joints_.size());
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    if (joints_[i].parent == kRootFrame) {
      roots.push_back(i);
    } else {
      children[joints_[i].parent].push_back(i);
    }
  }
  order_.clear();
  order_.reserve(joints_.size());
  std::vector<int> stack(roots.rbegin(), roots.rend());
  while (!stack.empty()) {
    const int j = stack.back();
    stack.pop_back();
    order_.push_back(j);
    for (auto it = children[j].rbegin(); it != children[j].rend(); ++it) stack.push_back(*it);
  }
  if (static_cast<int>(order_.size()) != n) {
    for (int i = 0; i < n; ++i) {
      if (std::find(order_.begin(), order_.end(), i) == order_.end()) {
        throw LoadError(joint_field(static_cast<std::size_t>(i), "parent") +
                        ": joint is part of a cycle and never reaches the root");
      }
    }
  }

  const std::size_t m = links_.size();
  std::vector<int> links_on_frame(joints_.size() + 1, 0);  // slot 0 is the root
  for (std::size_t i = 0; i < m; ++i) {
    const LinkSpec& l = links_[i];
    if (l.joint < kRootFrame || l.joint >= n) {
      throw LoadError(link_field(i, "joint") + ": index " + std::to_string(l.joint) + " out of range");
    }
    if (!(l.capsule.radius > 0.0) || !std::isfinite(l.capsule.radius)) {
      throw LoadError(link_field(i, "capsule.radius") + ": must be positive");
    }
    if (!finite(l.capsule.a) || !finite(l.capsule.b)) {
      throw LoadError(link_field(i, "capsule") + ": non-finite endpoint");
    }
    for (int other : l.mask) {
      if (other < 0 || other >= static_cast<int>(m)) {
        throw LoadError(link_field(i, "mask") + ": index " + std::to_string(other) + " out of range");
      }
    }
    ++links_on_frame[static_cast<std::size_t>(l.joint + 1)];
  }

  auto nearest_link_bearing_ancestor = [&](int frame) -> int {
    if (frame == kRootFrame) return kRootFrame - 1;  // root has no ancestor
    int p = joints_[frame].parent;
    while (p != kRootFrame && links_on_frame[static_cast<std::size_t>(p + 1)] == 0) {
      p = joints_[p].parent;
    }
    if (links_on_frame[static_cast<std::size_t>(p + 1)] == 0) return kRootFrame - 1;
    return p;
  };

  mask_.assign(m * m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    mask_[a * m + a] = 1;
    for (std::size_t b = a + 1; b < m; ++b) {
      const int fa = links_[a].joint;
      const int fb = links_[b].joint;
      const bool adjacent =
          fa == fb || nearest_link_bearing_ancestor(fa) == fb || nearest_link_bearing_ancestor(fb) == fa;
      if (adjacent) mask_[a * m + b] = mask_[b * m + a] = 1;
    }
    for (int other : links_[a].mask) {
      mask_[a * m + static_cast<std::size_t>(other)] = 1;
      mask_[static_cast<std::size_t>(other) * m + a] = 1;
    }
  }
}

int KinematicModel::joint_index(const std::string& name) const {
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    if (joints_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

bool KinematicModel::in_subtree(int ancestor, int joint) const {
  while (joint != kRootFrame) {
    if (joint == ancestor) return true;
    joint = joints_[static_cast<std::size_t>(joint)].parent;
  }
  return ancestor == kRootFrame;
}

Eigen::VectorXd KinematicModel::lower_limits() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(joints_.size()));
  for (std::size_t i = 0; i < joints_.size(); ++i) v[static_cast<Eigen::Index>(i)] = joints_[i].lower;
  return v;
}

Eigen::VectorXd KinematicModel::upper_limits() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(joints_.size()));
  for (std::size_t i = 0; i < joints_.size(); ++i) v[static_cast<Eigen::Index>(i)] = joints_[i].upper;
  return v;
}

bool KinematicModel::within_limits(const JointConfig& q, double tol) const {
  if (static_cast<std::size_t>(q.size()) != joints_.size()) return false;
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const double v = q[static_cast<Eigen::Index>(i)];
    if (!(v >= joints_[i].lower - tol && v <= joints_[i].upper + tol)) return false;
  }
  return true;
}

JointConfig KinematicModel::clamp(const JointConfig& q) const {
  JointConfig out = q;
  for (std::size_t i = 0; i < joints_.size() && static_cast<Eigen::Index>(i) < q.size(); ++i) {
    auto& v = out[static_cast<Eigen::Index>(i)];
    v = std::min(std::max(v, joints_[i].lower), joints_[i].upper);
  }
  return out;
}

KinematicModel attach(const KinematicModel& parent, int parent_joint, const RigidTransform& mount,
                      const KinematicModel& child, const std::string& prefix) {
  if (parent_joint < kRootFrame || parent_joint >= static_cast<int>(parent.joint_count())) {
    throw BuildError("attach: parent joint " + std::to_string(parent_joint) + " out of range");
  }
  const int joint_offset = static_cast<int>(parent.joint_count());
  const int link_offset = static_cast<int>(parent.link_count());

  std::vector<JointSpec> joints = parent.joints();
  for (JointSpec j : child.joints()) {
    j.name = prefix + j.name;
    if (j.parent == kRootFrame) {
      j.parent = parent_joint;
      j.origin = mount * j.origin;
    } else {
      j.parent += joint_offset;
    }
    joints.push_back(std::move(j));
  }

  std::vector<LinkSpec> links = parent.links();
  for (LinkSpec l : child.links()) {
    l.name = prefix + l.name;
    if (l.joint == kRootFrame) {
      l.joint = parent_joint;
      l.capsule = transform_capsule(mount, l.capsule);
    } else {
      l.joint += joint_offset;
    }
    for (int& other : l.mask) other += link_offset;
    links.push_back(std::move(l));
  }
  return KinematicModel(std::move(joints), std::move(links), parent.root_name());
}

}  // namespace telephantom
