#include "telephantom/session.hpp"

#include <algorithm>

#include "telephantom/error.hpp"
#include "telephantom/model_io.hpp"

namespace telephantom {

Json SessionSummary::to_json() const {
  return Json{{"phase_seconds", {{"LIVE", live_seconds}, {"PREVIEW", preview_seconds}, {"EXECUTING", executing_seconds}}},
              {"ticks", ticks},
              {"gated_ticks", gated_ticks},
              {"gate_activations", gate_activations},
              {"preview_intervals", preview_intervals},
              {"executions", executions},
              {"planner_failures", planner_failures},
              {"rejected_events", rejected_events}};
}

Session::Session(TeleopPipeline pipeline, FrameGraph graph, DemoMetadata metadata, std::vector<CameraSpec> cameras)
    : pipeline_(std::move(pipeline)), graph_(std::move(graph)), cameras_(std::move(cameras)),
      state_(initial_state(pipeline_)), recorder_(std::move(metadata)) {
  if (!cameras_.empty()) view_ = cameras_.front().name;
}

namespace {

DemoMetadata scene_metadata(const SceneConfig& scene, const TeleopPipeline& p) {
  return {scene.task, scene.seed, model_hash(p.robot)};
}

}  // namespace

Session::Session(const SceneConfig& scene) : Session(build_pipeline(scene), build_frame_graph(scene), {}, scene.cameras) {
  recorder_ = DemoRecorder(scene_metadata(scene, pipeline_));
}

StepOutcome Session::apply(const Event& event) {
  const Phase before = state_.phase;
  const bool gate_before = state_.gate_active;
  const auto* tick = std::get_if<InputTick>(&event);
  StepOutcome out = step(pipeline_, state_, event);
  if (!out.accepted()) {
    ++summary_.rejected_events;
    return out;
  }
  if (out.planner_failed) ++summary_.planner_failures;
  if (before == Phase::kLive && state_.phase == Phase::kPreview) ++summary_.preview_intervals;
  if (before == Phase::kPreview && state_.phase == Phase::kExecuting) ++summary_.executions;

  if (tick) {
    const double t = tick->wrist.t;
    if (last_tick_) {
      const double dt = t - *last_tick_;
      switch (before) {
        case Phase::kLive: summary_.live_seconds += dt; break;
        case Phase::kPreview: summary_.preview_seconds += dt; break;
        case Phase::kExecuting: summary_.executing_seconds += dt; break;
      }
    }
    last_tick_ = t;
    ++summary_.ticks;
    if (out.gated) ++summary_.gated_ticks;
    if (out.gated && !gate_before) ++summary_.gate_activations;
    if (out.record) {
      recorder_.append({t, before, state_.robot_q, pipeline_.ee_pose(state_.robot_q), state_.pedal_down});
    }
    if (out.trajectory_finished) step(pipeline_, state_, TrajectoryDone{});
  }
  return out;
}

ErrorMessage error_for(const StepOutcome& outcome) {
  if (outcome.planner_failed) return {error_code::kPlannerFailed, outcome.message};
  if (outcome.status == StepStatus::kRejectedBusy) return {error_code::kBusy, outcome.message};
  return {error_code::kIllegal, outcome.message};
}

std::optional<ErrorMessage> Session::handle(const ClientMessage& message) {
  if (const auto* in = std::get_if<InputMessage>(&message)) {
    const StepOutcome out = apply(InputTick{in->frame.wrist, in->frame.glove});
    if (!out.accepted()) return error_for(out);
    return std::nullopt;
  }
  if (const auto* p = std::get_if<PedalMessage>(&message)) {
    const StepOutcome out = p->down ? apply(PedalDown{}) : apply(PedalUp{});
    if (!out.accepted() || out.planner_failed) return error_for(out);
    return std::nullopt;
  }
  return handle_view(std::get<ViewMessage>(message));
}

std::optional<ErrorMessage> Session::handle_view(const ViewMessage& v) {
  const auto cam = std::find_if(cameras_.begin(), cameras_.end(), [&](const CameraSpec& c) { return c.name == v.camera; });
  if (cam == cameras_.end()) return ErrorMessage{error_code::kUnknownCamera, "no camera named '" + v.camera + "'"};
  if (v.tag_pose) {
    if (cam->pose_source != PoseSource::kFloating) {
      return ErrorMessage{error_code::kBadMessage, "tag_pose is only accepted for the floating camera"};
    }
    try {
      graph_.observe({frames::kFloatCam, *v.tag_pose, state_.clock});
    } catch (const Error& e) {
      return ErrorMessage{error_code::kCalibration, e.what()};
    }
  }
  view_ = v.camera;
  return std::nullopt;
}

StateMessage Session::snapshot() {
  StateMessage s;
  s.seq = ++seq_;
  s.fsm = state_.phase;
  s.robot_q = state_.robot_q;
  s.phantom_q = state_.phantom_q;
  s.frames = graph_.snapshot().at("frames");
  s.gate = state_.gate_active;
  s.collision = check_self_collision(pipeline_.robot, state_.phantom_q);
  s.view = view_;
  return s;
}

}  // namespace telephantom
