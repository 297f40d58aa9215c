#include "telephantom/phantom_fsm.hpp"

#include "telephantom/error.hpp"

namespace telephantom {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

StepOutcome reject(StepStatus status, std::string message) {
  StepOutcome out;
  out.status = status;
  out.message = std::move(message);
  return out;
}

void anchor(const TeleopPipeline& pipeline, SessionState& s, const JointConfig& from, const WristSample& wrist) {
  const RigidTransform ee = pipeline.ee_pose(from);
  s.wrist_origin = wrist;
  s.ee_origin = EndEffectorTarget{wrist.t, ee.translation(), ee.rotation()};
  s.anchor_pending = false;
}

void resume_live(const TeleopPipeline& pipeline, SessionState& s) {
  s.trajectory.reset();
  s.phase = Phase::kLive;
  s.phantom_q = s.robot_q;
  rebase_origins(pipeline, s, s.latest_wrist.value_or(s.wrist_origin));
}

StepOutcome on_tick(const TeleopPipeline& pipeline, SessionState& s, const InputTick& tick) {
  if (s.clock_started && !(tick.wrist.t > s.clock)) {
    return reject(StepStatus::kRejectedIllegal, "input timestamps must be strictly increasing");
  }
  s.clock = tick.wrist.t;
  s.clock_started = true;
  s.latest_wrist = tick.wrist;

  StepOutcome out;
  switch (s.phase) {
    case Phase::kLive: {
      if (s.anchor_pending) anchor(pipeline, s, s.robot_q, tick.wrist);
      auto cmd = pipeline.retarget(s.robot_q, tick.wrist, tick.glove, s.wrist_origin, s.ee_origin);
      s.robot_q = std::move(cmd.q);
      s.phantom_q = s.robot_q;
      s.last_target = cmd.target;
      s.gate_active = out.gated = cmd.gated;
      out.record = true;
      break;
    }
    case Phase::kPreview: {
      if (s.anchor_pending) anchor(pipeline, s, s.robot_q, tick.wrist);
      auto cmd = pipeline.retarget(s.phantom_q, tick.wrist, tick.glove, s.wrist_origin, s.ee_origin);
      s.phantom_q = std::move(cmd.q);
      s.last_target = cmd.target;
      s.gate_active = out.gated = cmd.gated;
      break;
    }
    case Phase::kExecuting: {
      const double elapsed = s.clock - s.execution_start;
      s.robot_q = s.trajectory->sample(elapsed);
      out.trajectory_finished = elapsed >= s.trajectory->duration();
      out.record = true;
      break;
    }
  }
  return out;
}

StepOutcome on_pedal_down(SessionState& s) {
  switch (s.phase) {
    case Phase::kLive:
      s.phase = Phase::kPreview;
      s.phantom_q = s.robot_q;
      s.pedal_down = true;
      s.planner_error = false;
      s.last_error.clear();
      return {};
    case Phase::kPreview:
      if (s.pedal_down) return reject(StepStatus::kRejectedIllegal, "pedal already down");
      // Re-arming after a failed commit keeps the phantom where it was.
      s.pedal_down = true;
      s.planner_error = false;
      s.last_error.clear();
      return {};
    case Phase::kExecuting:
      return reject(StepStatus::kRejectedBusy, "executing a trajectory");
  }
  return {};
}

StepOutcome on_pedal_up(const TeleopPipeline& pipeline, SessionState& s) {
  if (s.phase != Phase::kPreview || !s.pedal_down) {
    return reject(StepStatus::kRejectedIllegal, "pedal is not down");
  }
  s.pedal_down = false;
  const JointConfig target = s.phantom_q;
  StepOutcome out;
  try {
    Trajectory traj = plan_trajectory(pipeline.robot, s.robot_q, target, pipeline.planner_dt);
    if (traj.duration() == 0.0) {
      s.robot_q = target;
      resume_live(pipeline, s);
      return out;
    }
    s.trajectory = std::move(traj);
    s.execution_start = s.clock;
    s.phase = Phase::kExecuting;
  } catch (const Error& e) {
    s.planner_error = true;
    s.last_error = e.what();
    out.planner_failed = true;
    out.message = e.what();
  }
  return out;
}

StepOutcome on_trajectory_done(const TeleopPipeline& pipeline, SessionState& s) {
  if (s.phase != Phase::kExecuting) return reject(StepStatus::kRejectedIllegal, "no trajectory is executing");
  s.robot_q = s.trajectory->goal();
  resume_live(pipeline, s);
  return {};
}

}  // namespace

std::string to_string(Phase p) {
  switch (p) {
    case Phase::kLive: return "LIVE";
    case Phase::kPreview: return "PREVIEW";
    case Phase::kExecuting: return "EXECUTING";
  }
  return "LIVE";
}

Phase phase_from_string(const std::string& s) {
  if (s == "LIVE") return Phase::kLive;
  if (s == "PREVIEW") return Phase::kPreview;
  if (s == "EXECUTING") return Phase::kExecuting;
  throw LoadError("unknown phase '" + s + "'");
}

std::string event_name(const Event& e) {
  return std::visit(Overloaded{[](const PedalDown&) { return std::string("pedal_down"); },
                               [](const PedalUp&) { return std::string("pedal_up"); },
                               [](const TrajectoryDone&) { return std::string("trajectory_done"); },
                               [](const InputTick&) { return std::string("input_tick"); }},
                    e);
}

RigidTransform TeleopPipeline::ee_pose(const JointConfig& q) const {
  return forward_kinematics(robot, q)[static_cast<std::size_t>(flange_joint)];
}

TeleopPipeline::Command TeleopPipeline::retarget(const JointConfig& seed, const WristSample& wrist,
                                                 const GloveSample& glove, const WristSample& wrist_origin,
                                                 const EndEffectorTarget& ee_origin) const {
  Command cmd;
  cmd.target = wrist_to_target(wrist, wrist_origin, ee_origin);
  cmd.q = solve_ik(robot, flange_joint, cmd.target.pose(), seed, ik).q;
  JointConfig hand = map_hand(mapping, glove);
  if (has_correction()) {
    CorrectionResult r = correct(hand, *cpn, *ccn, gate_threshold);
    cmd.gated = r.was_gated;
    hand = std::move(r.corrected);
  }
  cmd.q.segment(static_cast<Eigen::Index>(hand_offset), static_cast<Eigen::Index>(hand_joints)) = hand;
  return cmd;
}

SessionState initial_state(const TeleopPipeline& pipeline) {
  SessionState s;
  s.robot_q = pipeline.initial;
  s.phantom_q = pipeline.initial;
  const RigidTransform ee = pipeline.ee_pose(pipeline.initial);
  s.ee_origin = EndEffectorTarget{0.0, ee.translation(), ee.rotation()};
  return s;
}

void rebase_origins(const TeleopPipeline& pipeline, SessionState& state, const WristSample& latest) {
  anchor(pipeline, state, state.robot_q, latest);
  state.anchor_pending = true;
}

StepOutcome step(const TeleopPipeline& pipeline, SessionState& state, const Event& event) {
  return std::visit(Overloaded{[&](const PedalDown&) { return on_pedal_down(state); },
                               [&](const PedalUp&) { return on_pedal_up(pipeline, state); },
                               [&](const TrajectoryDone&) { return on_trajectory_done(pipeline, state); },
                               [&](const InputTick& t) { return on_tick(pipeline, state, t); }},
                    event);
}

}  // namespace telephantom
