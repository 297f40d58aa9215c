#pragma once

#include <filesystem>
#include <functional>
#include <istream>
#include <vector>

#include "telephantom/session.hpp"

namespace telephantom {

struct PedalEvent {
  double t = 0.0;
  bool down = false;
};

/// JSON lines {"t": seconds, "state": "down"|"up"}, times non-decreasing.
/// Throws ParseError with the offending line number.
std::vector<PedalEvent> parse_pedal_script(std::istream& in);
std::vector<PedalEvent> load_pedal_script(const std::filesystem::path& path);
std::string pedal_script_to_string(const std::vector<PedalEvent>& events);

struct ReplayResult {
  DemoRecord demo;
  SessionSummary summary;
  SessionState final_state;

  Json summary_json() const;
};

/// Called after every processed input frame.
using ReplayObserver = std::function<void(const InputFrame&, const Session&)>;

/// Headless run: pedal events stamped at or before a frame's time are applied
/// before that frame; events after the last frame are applied at the end.
/// Rejected pedal events are counted in the summary, not fatal.
ReplayResult replay(Session& session, const std::vector<InputFrame>& trace, const std::vector<PedalEvent>& pedal,
                    const ReplayObserver& observer = {});
ReplayResult replay(const SceneConfig& scene, const std::vector<InputFrame>& trace,
                    const std::vector<PedalEvent>& pedal, const ReplayObserver& observer = {});

}  // namespace telephantom
