#pragma once

#include <optional>
#include <string>
#include <variant>

#include "telephantom/collision_net.hpp"
#include "telephantom/inverse_kinematics.hpp"
#include "telephantom/retarget.hpp"
#include "telephantom/trajectory.hpp"

namespace telephantom {

enum class Phase { kLive, kPreview, kExecuting };
std::string to_string(Phase p);
Phase phase_from_string(const std::string& s);

/// Everything the state machine needs that does not change during a session:
/// the arm+hand model, the glove mapping, the optional correction networks.
struct TeleopPipeline {
  KinematicModel robot;            // arm with the hand attached below the flange
  std::size_t hand_offset = 0;     // first hand joint inside robot configurations
  std::size_t hand_joints = 0;
  int flange_joint = 0;            // end-effector frame
  MappingTable mapping;
  std::optional<NetworkParams> cpn;
  std::optional<NetworkParams> ccn;
  double gate_threshold = 0.5;
  IkOptions ik;
  double planner_dt = kDefaultPlannerDt;
  JointConfig initial;             // robot configuration at session start

  bool has_correction() const { return cpn.has_value() && ccn.has_value(); }
  RigidTransform ee_pose(const JointConfig& q) const;

  struct Command {
    JointConfig q;
    EndEffectorTarget target;
    bool gated = false;
  };
  /// Wrist → end-effector target → arm IK seeded at `seed`, glove → hand joints
  /// through the mapping and, when networks are present, the correction gate.
  Command retarget(const JointConfig& seed, const WristSample& wrist, const GloveSample& glove,
                   const WristSample& wrist_origin, const EndEffectorTarget& ee_origin) const;
};

struct PedalDown {};
struct PedalUp {};
struct TrajectoryDone {};
struct InputTick {
  WristSample wrist;
  GloveSample glove;
};
using Event = std::variant<PedalDown, PedalUp, TrajectoryDone, InputTick>;
std::string event_name(const Event& e);

struct SessionState {
  Phase phase = Phase::kLive;
  JointConfig robot_q;
  JointConfig phantom_q;
  WristSample wrist_origin;
  EndEffectorTarget ee_origin;
  // Set at start and on every resume: the next input tick re-anchors both
  // origins so that tick commands zero displacement.
  bool anchor_pending = true;
  std::optional<Trajectory> trajectory;
  double execution_start = 0.0;
  std::optional<WristSample> latest_wrist;
  double clock = 0.0;
  bool clock_started = false;
  bool pedal_down = false;
  bool planner_error = false;
  std::string last_error;
  bool gate_active = false;
  std::optional<EndEffectorTarget> last_target;
};

SessionState initial_state(const TeleopPipeline& pipeline);

enum class StepStatus { kAccepted, kRejectedBusy, kRejectedIllegal };

struct StepOutcome {
  StepStatus status = StepStatus::kAccepted;
  std::string message;
  bool gated = false;
  bool planner_failed = false;
  bool trajectory_finished = false;  // the owner should now deliver TrajectoryDone
  bool record = false;               // this step produced a LIVE/EXECUTING sample

  bool accepted() const { return status == StepStatus::kAccepted; }
};

/// Preview-then-execute transitions:
///   LIVE      + tick           robot follows the operator, phantom mirrors it
///   LIVE      + pedal_down  -> PREVIEW, robot frozen, phantom detaches
///   PREVIEW   + tick           phantom follows the operator
///   PREVIEW   + pedal_up    -> plan robot → phantom; EXECUTING (or LIVE when
///                              already there); on planning failure stay in
///                              PREVIEW with planner_error set
///   EXECUTING + tick           robot plays back the trajectory; operator input
///                              is only remembered
///   EXECUTING + traj_done   -> LIVE with origins re-based
///   EXECUTING + pedal_down     rejected (busy)
/// Every other combination is rejected without touching the state.
StepOutcome step(const TeleopPipeline& pipeline, SessionState& state, const Event& event);

/// Re-anchors the relative wrist mapping at the robot's current end-effector
/// pose; used when teleoperation resumes after an execution.
void rebase_origins(const TeleopPipeline& pipeline, SessionState& state, const WristSample& latest);

}  // namespace telephantom
