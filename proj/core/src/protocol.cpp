#include "telephantom/protocol.hpp"

#include "telephantom/error.hpp"

namespace telephantom {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json parse_object(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ProtocolError(error_code::kBadMessage, e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ProtocolError(error_code::kBadMessage, "message must be an object with a string 'type'");
  }
  return j;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const ProtocolError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProtocolError(error_code::kBadMessage, e.what());
  }
}

}  // namespace

Json to_json(const ClientMessage& m) {
  return std::visit(Overloaded{
                        [](const InputMessage& in) {
                          Json j = frame_to_json(in.frame);
                          j["type"] = "input";
                          return j;
                        },
                        [](const PedalMessage& p) { return Json{{"type", "pedal"}, {"state", p.down ? "down" : "up"}}; },
                        [](const ViewMessage& v) {
                          Json j{{"type", "view"}, {"camera", v.camera}};
                          if (v.tag_pose) j["tag_pose"] = to_json(*v.tag_pose);
                          return j;
                        },
                    },
                    m);
}

Json to_json(const ServerMessage& m) {
  return std::visit(Overloaded{
                        [](const StateMessage& s) {
                          return Json{{"type", "state"},      {"seq", s.seq},
                                      {"fsm", to_string(s.fsm)},  {"robot_q", to_json(s.robot_q)},
                                      {"phantom_q", to_json(s.phantom_q)}, {"frames", s.frames},
                                      {"gate", s.gate},         {"collision", s.collision},
                                      {"view", s.view}};
                        },
                        [](const ErrorMessage& e) { return Json{{"type", "error"}, {"code", e.code}, {"msg", e.msg}}; },
                    },
                    m);
}

std::string serialize(const ClientMessage& m) { return to_json(m).dump(); }
std::string serialize(const ServerMessage& m) { return to_json(m).dump(); }

ClientMessage parse_client_message(const std::string& text) {
  const Json j = parse_object(text);
  const std::string type = j.at("type").get<std::string>();
  return guarded([&]() -> ClientMessage {
    if (type == "input") return InputMessage{frame_from_json(j)};
    if (type == "pedal") {
      const std::string state = require(j, "state", "pedal").get<std::string>();
      if (state != "down" && state != "up") throw ProtocolError(error_code::kBadMessage, "pedal.state must be down or up");
      return PedalMessage{state == "down"};
    }
    if (type == "view") {
      ViewMessage v{require(j, "camera", "view").get<std::string>(), std::nullopt};
      if (j.contains("tag_pose")) v.tag_pose = transform_from_json(j.at("tag_pose"), "view.tag_pose");
      return v;
    }
    throw ProtocolError(error_code::kBadMessage, "unknown message type '" + type + "'");
  });
}

ServerMessage parse_server_message(const std::string& text) {
  const Json j = parse_object(text);
  const std::string type = j.at("type").get<std::string>();
  return guarded([&]() -> ServerMessage {
    if (type == "state") {
      StateMessage s;
      s.seq = require(j, "seq", "state").get<std::uint64_t>();
      s.fsm = phase_from_string(require(j, "fsm", "state").get<std::string>());
      s.robot_q = vector_from_json(require(j, "robot_q", "state"), "robot_q");
      s.phantom_q = vector_from_json(require(j, "phantom_q", "state"), "phantom_q");
      s.frames = require(j, "frames", "state");
      s.gate = require(j, "gate", "state").get<bool>();
      s.collision = require(j, "collision", "state").get<std::vector<bool>>();
      s.view = j.value("view", std::string());
      return s;
    }
    if (type == "error") {
      return ErrorMessage{require(j, "code", "error").get<std::string>(), require(j, "msg", "error").get<std::string>()};
    }
    throw ProtocolError(error_code::kBadMessage, "unknown message type '" + type + "'");
  });
}

}  // namespace telephantom
