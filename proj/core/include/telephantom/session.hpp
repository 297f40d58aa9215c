#pragma once

#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "telephantom/demo_recorder.hpp"
#include "telephantom/protocol.hpp"
#include "telephantom/scene.hpp"

namespace telephantom {

struct SessionSummary {
  double live_seconds = 0.0;
  double preview_seconds = 0.0;
  double executing_seconds = 0.0;
  std::size_t ticks = 0;
  std::size_t gated_ticks = 0;
  std::size_t gate_activations = 0;  // rising edges of the correction gate
  std::size_t preview_intervals = 0;
  std::size_t executions = 0;
  std::size_t planner_failures = 0;
  std::size_t rejected_events = 0;

  Json to_json() const;
};

/// One teleoperation session. Not thread-safe: a single loop owns it and
/// feeds it events in order. Every input tick processed in LIVE or EXECUTING
/// is appended to the demo recorder; when an execution finishes the session
/// delivers TrajectoryDone to itself.
class Session {
 public:
  Session(TeleopPipeline pipeline, FrameGraph graph, DemoMetadata metadata, std::vector<CameraSpec> cameras = {});
  explicit Session(const SceneConfig& scene);

  StepOutcome apply(const Event& event);

  /// Pedal and view messages act immediately; input messages become ticks.
  /// Returns the error to report to the client, if any.
  std::optional<ErrorMessage> handle(const ClientMessage& message);

  /// Snapshot with the next sequence number.
  StateMessage snapshot();

  const TeleopPipeline& pipeline() const { return pipeline_; }
  const SessionState& state() const { return state_; }
  const FrameGraph& frame_graph() const { return graph_; }
  const DemoRecorder& recorder() const { return recorder_; }
  const SessionSummary& summary() const { return summary_; }
  const std::string& view() const { return view_; }

 private:
  std::optional<ErrorMessage> handle_view(const ViewMessage& v);

  TeleopPipeline pipeline_;
  FrameGraph graph_;
  std::vector<CameraSpec> cameras_;
  SessionState state_;
  DemoRecorder recorder_;
  SessionSummary summary_;
  std::uint64_t seq_ = 0;
  std::string view_;
  std::optional<double> last_tick_;
};

/// Multi-producer FIFO used to hand client messages from network contexts to
/// the session loop.
template <class T>
class MessageQueue {
 public:
  void push(T value) {
    std::lock_guard lock(mu_);
    items_.push_back(std::move(value));
  }
  std::vector<T> take_all() {
    std::lock_guard lock(mu_);
    std::vector<T> out(std::make_move_iterator(items_.begin()), std::make_move_iterator(items_.end()));
    items_.clear();
    return out;
  }

 private:
  std::mutex mu_;
  std::deque<T> items_;
};

ErrorMessage error_for(const StepOutcome& outcome);

}  // namespace telephantom
