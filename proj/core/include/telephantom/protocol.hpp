#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "telephantom/io_streams.hpp"
#include "telephantom/phantom_fsm.hpp"

namespace telephantom {

// Client → server.
struct InputMessage {
  InputFrame frame;
};
struct PedalMessage {
  bool down = false;
};
/// Switches the active camera. A floating-camera view may carry a fresh
/// float_cam→tag observation (the camera was moved); the server re-solves it.
struct ViewMessage {
  std::string camera;
  std::optional<RigidTransform> tag_pose;
};
using ClientMessage = std::variant<InputMessage, PedalMessage, ViewMessage>;

// Server → client.
struct StateMessage {
  std::uint64_t seq = 0;
  Phase fsm = Phase::kLive;
  JointConfig robot_q;
  JointConfig phantom_q;
  Json frames = Json::object();
  bool gate = false;
  std::vector<bool> collision;
  std::string view;
};
struct ErrorMessage {
  std::string code;
  std::string msg;
};
using ServerMessage = std::variant<StateMessage, ErrorMessage>;

namespace error_code {
inline const std::string kBadMessage = "bad_message";
inline const std::string kBusy = "busy";
inline const std::string kIllegal = "illegal_transition";
inline const std::string kPlannerFailed = "planner_failed";
inline const std::string kOperatorPresent = "operator_present";
inline const std::string kUnknownCamera = "unknown_camera";
inline const std::string kCalibration = "calibration";
}  // namespace error_code

Json to_json(const ClientMessage& m);
Json to_json(const ServerMessage& m);
std::string serialize(const ClientMessage& m);
std::string serialize(const ServerMessage& m);

/// Throw ProtocolError(kBadMessage) for malformed text, unknown types or bad fields.
ClientMessage parse_client_message(const std::string& text);
ServerMessage parse_server_message(const std::string& text);

}  // namespace telephantom
