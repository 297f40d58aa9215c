#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "telephantom/json_io.hpp"
#include "telephantom/kinematics.hpp"

namespace telephantom {

inline constexpr std::size_t kGloveChannels = 27;

/// Wrist pose in the operator's world frame (origin between the feet).
struct WristSample {
  double t = 0.0;
  RigidTransform pose;
};

/// Raw glove flex readings, radians. Channel layout, five per finger
/// (thumb, index, middle, ring, pinky) followed by two wrist channels:
///   5f+0 spread, 5f+1 MCP flexion, 5f+2 PIP, 5f+3 DIP, 5f+4 roll,
///   25 wrist flexion, 26 wrist deviation.
struct GloveSample {
  double t = 0.0;
  std::array<double, kGloveChannels> angles{};
};

struct EndEffectorTarget {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  RigidTransform pose() const { return {orientation, position}; }
};

/// Relative position; orientation follows the wrist's rotation since the
/// anchor:
///   p_e(t) = p_e(0) + (p_w(t) - p_w(0)),  R_e(t) = R_w(t) R_w(0)^-1 R_e(0).
/// When the anchor aligns the two (R_e(0) = R_w(0)) this is R_e(t) = R_w(t).
EndEffectorTarget wrist_to_target(const WristSample& current, const WristSample& wrist_origin,
                                  const EndEffectorTarget& ee_origin);

/// Manually chosen glove channel and rotation sense for one robot joint, with
/// the calibrated glove range of that channel.
struct JointCorrespondence {
  std::size_t robot_joint = 0;
  std::size_t glove_channel = 0;
  int direction = 1;
  double glove_min = 0.0;
  double glove_max = 1.0;
};

/// f(x) = scale * (x - bias) * direction, then clamped to [robot_min, robot_max].
struct JointMapping {
  std::size_t glove_channel = 0;
  double scale = 1.0;
  double bias = 0.0;
  int direction = 1;
  double glove_min = 0.0;
  double glove_max = 1.0;
  double robot_min = 0.0;
  double robot_max = 1.0;

  double apply_unclamped(double x) const { return scale * (x - bias) * direction; }
};

/// One JointMapping per robot joint, indexed by robot joint.
class MappingTable {
 public:
  MappingTable() = default;
  explicit MappingTable(std::vector<JointMapping> joints);

  std::size_t size() const { return joints_.size(); }
  const JointMapping& operator[](std::size_t i) const { return joints_[i]; }
  const std::vector<JointMapping>& joints() const { return joints_; }

 private:
  std::vector<JointMapping> joints_;
};

/// Solves scale and bias per joint from the two endpoint constraints so that the
/// glove range maps exactly onto the robot range (ends swapped when direction = -1).
/// Throws BuildError for degenerate ranges, bad directions, or incomplete coverage.
MappingTable build_mapping(std::span<const JointCorrespondence> correspondence,
                           const Eigen::VectorXd& robot_lower, const Eigen::VectorXd& robot_upper);

/// q_r[i] = clamp(f_i(q_g[k_i])).
JointConfig map_hand(const MappingTable& table, const GloveSample& glove);

/// Mapping config: {"entries": [{robot_joint, glove_channel, direction, glove_min, glove_max}]}.
/// robot_joint may be a joint name or an index into `hand`; limits come from `hand`.
MappingTable mapping_from_json(const Json& doc, const KinematicModel& hand);
MappingTable load_mapping(const std::filesystem::path& path, const KinematicModel& hand);

}  // namespace telephantom
