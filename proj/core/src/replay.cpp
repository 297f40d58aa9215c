#include "telephantom/replay.hpp"

#include <fstream>

#include "telephantom/error.hpp"

namespace telephantom {

std::vector<PedalEvent> parse_pedal_script(std::istream& in) {
  std::vector<PedalEvent> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    PedalEvent e;
    try {
      const Json j = Json::parse(line);
      e.t = require_number(j, "t", "pedal");
      const std::string state = require(j, "state", "pedal").get<std::string>();
      if (state != "down" && state != "up") throw LoadError("state must be down or up");
      e.down = state == "down";
    } catch (const std::exception& ex) {
      throw ParseError(ex.what(), line_no);
    }
    if (!out.empty() && e.t < out.back().t) throw ParseError("pedal times must not decrease", line_no);
    out.push_back(e);
  }
  return out;
}

std::vector<PedalEvent> load_pedal_script(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string() + ": cannot open file");
  return parse_pedal_script(in);
}

std::string pedal_script_to_string(const std::vector<PedalEvent>& events) {
  std::string out;
  for (const PedalEvent& e : events) {
    out += Json{{"t", e.t}, {"state", e.down ? "down" : "up"}}.dump();
    out += '\n';
  }
  return out;
}

Json ReplayResult::summary_json() const {
  Json j = summary.to_json();
  const PhaseCounts c = demo.counts();
  j["samples"] = {{"LIVE", c.live}, {"PREVIEW", c.preview}, {"EXECUTING", c.executing}};
  j["final_phase"] = to_string(final_state.phase);
  return j;
}

ReplayResult replay(Session& session, const std::vector<InputFrame>& trace, const std::vector<PedalEvent>& pedal,
                    const ReplayObserver& observer) {
  std::size_t next_pedal = 0;
  auto apply_pedal = [&](const PedalEvent& e) {
    if (e.down) {
      session.apply(PedalDown{});
    } else {
      session.apply(PedalUp{});
    }
  };
  for (const InputFrame& f : trace) {
    while (next_pedal < pedal.size() && pedal[next_pedal].t <= f.t()) apply_pedal(pedal[next_pedal++]);
    session.apply(InputTick{f.wrist, f.glove});
    if (observer) observer(f, session);
  }
  while (next_pedal < pedal.size()) apply_pedal(pedal[next_pedal++]);
  return {session.recorder().record(), session.summary(), session.state()};
}

ReplayResult replay(const SceneConfig& scene, const std::vector<InputFrame>& trace,
                    const std::vector<PedalEvent>& pedal, const ReplayObserver& observer) {
  Session session(scene);
  return replay(session, trace, pedal, observer);
}

}  // namespace telephantom
