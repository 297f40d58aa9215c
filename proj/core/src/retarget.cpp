#include "telephantom/retarget.hpp"

#include <algorithm>
#include <cmath>

#include "telephantom/error.hpp"

namespace telephantom {

EndEffectorTarget wrist_to_target(const WristSample& current, const WristSample& wrist_origin,
                                  const EndEffectorTarget& ee_origin) {
  EndEffectorTarget out;
  out.t = current.t;
  out.position = ee_origin.position + (current.pose.translation() - wrist_origin.pose.translation());
  out.orientation = (current.pose.rotation() * wrist_origin.pose.rotation().conjugate() * ee_origin.orientation).normalized();
  return out;
}

MappingTable::MappingTable(std::vector<JointMapping> joints) : joints_(std::move(joints)) {
  for (const JointMapping& m : joints_) {
    if (!(m.scale > 0.0) || (m.direction != 1 && m.direction != -1)) {
      throw BuildError("mapping table: scale must be positive and direction +-1");
    }
  }
}

MappingTable build_mapping(std::span<const JointCorrespondence> correspondence,
                           const Eigen::VectorXd& robot_lower, const Eigen::VectorXd& robot_upper) {
  const std::size_t n = static_cast<std::size_t>(robot_lower.size());
  if (static_cast<std::size_t>(robot_upper.size()) != n) {
    throw BuildError("build_mapping: robot limit vectors differ in length");
  }
  if (correspondence.size() != n) {
    throw BuildError("build_mapping: expected " + std::to_string(n) + " entries, got " +
                     std::to_string(correspondence.size()));
  }
  std::vector<JointMapping> joints(n);
  std::vector<bool> seen(n, false);
  for (const JointCorrespondence& c : correspondence) {
    const std::string where = "build_mapping: robot joint " + std::to_string(c.robot_joint);
    if (c.robot_joint >= n) throw BuildError(where + " out of range");
    if (seen[c.robot_joint]) throw BuildError(where + " mapped twice");
    seen[c.robot_joint] = true;
    if (c.glove_channel >= kGloveChannels) throw BuildError(where + ": glove channel out of range");
    if (c.direction != 1 && c.direction != -1) throw BuildError(where + ": direction must be +1 or -1");
    if (!(c.glove_max > c.glove_min)) throw BuildError(where + ": degenerate glove range");
    const double rmin = robot_lower[static_cast<Eigen::Index>(c.robot_joint)];
    const double rmax = robot_upper[static_cast<Eigen::Index>(c.robot_joint)];
    if (!(rmax > rmin)) throw BuildError(where + ": degenerate robot range");

    JointMapping m;
    m.glove_channel = c.glove_channel;
    m.direction = c.direction;
    m.glove_min = c.glove_min;
    m.glove_max = c.glove_max;
    m.robot_min = rmin;
    m.robot_max = rmax;
    m.scale = (rmax - rmin) / (c.glove_max - c.glove_min);
    // direction +1: f(gmin) = rmin.  direction -1: -s (gmin - b) = rmax.
    m.bias = c.direction == 1 ? c.glove_min - rmin / m.scale : c.glove_min + rmax / m.scale;
    joints[c.robot_joint] = m;
  }
  return MappingTable(std::move(joints));
}

JointConfig map_hand(const MappingTable& table, const GloveSample& glove) {
  JointConfig q(static_cast<Eigen::Index>(table.size()));
  for (std::size_t i = 0; i < table.size(); ++i) {
    const JointMapping& m = table[i];
    const double v = m.apply_unclamped(glove.angles[m.glove_channel]);
    q[static_cast<Eigen::Index>(i)] = std::clamp(v, m.robot_min, m.robot_max);
  }
  return q;
}

MappingTable mapping_from_json(const Json& doc, const KinematicModel& hand) {
  const Json& entries = require(doc, "entries", "");
  if (!entries.is_array()) throw LoadError("entries: expected an array");
  std::vector<JointCorrespondence> corr;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string field = "entries[" + std::to_string(i) + "]";
    const Json& e = entries[i];
    JointCorrespondence c;
    const Json& rj = require(e, "robot_joint", field);
    if (rj.is_string()) {
      const int idx = hand.joint_index(rj.get<std::string>());
      if (idx < 0) throw LoadError(field + ".robot_joint: unknown joint '" + rj.get<std::string>() + "'");
      c.robot_joint = static_cast<std::size_t>(idx);
    } else if (rj.is_number_integer() && rj.get<int>() >= 0) {
      c.robot_joint = rj.get<std::size_t>();
    } else {
      throw LoadError(field + ".robot_joint: expected a joint name or index");
    }
    const Json& ch = require(e, "glove_channel", field);
    if (!ch.is_number_integer() || ch.get<int>() < 0) {
      throw LoadError(field + ".glove_channel: expected a non-negative integer");
    }
    c.glove_channel = ch.get<std::size_t>();
    c.direction = static_cast<int>(require_number(e, "direction", field));
    c.glove_min = require_number(e, "glove_min", field);
    c.glove_max = require_number(e, "glove_max", field);
    corr.push_back(c);
  }
  try {
    return build_mapping(corr, hand.lower_limits(), hand.upper_limits());
  } catch (const BuildError& e) {
    throw LoadError(std::string("mapping: ") + e.what());
  }
}

MappingTable load_mapping(const std::filesystem::path& path, const KinematicModel& hand) {
  try {
    return mapping_from_json(read_json_file(path), hand);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

}  // namespace telephantom
