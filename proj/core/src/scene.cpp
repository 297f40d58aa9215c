#include "telephantom/scene.hpp"

#include "telephantom/error.hpp"
#include "telephantom/model_io.hpp"

namespace telephantom {
namespace {

std::filesystem::path existing_file(const Json& doc, const char* key, const std::filesystem::path& base) {
  const Json& v = require(doc, key, "scene");
  if (!v.is_string()) throw LoadError(std::string("scene.") + key + ": expected a path");
  std::filesystem::path p = v.get<std::string>();
  if (p.is_relative()) p = base / p;
  if (!std::filesystem::is_regular_file(p)) {
    throw LoadError(std::string("scene.") + key + ": file not found: " + p.string());
  }
  return p;
}

std::optional<std::filesystem::path> optional_file(const Json& doc, const char* key,
                                                   const std::filesystem::path& base) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return existing_file(doc, key, base);
}

}  // namespace

SceneConfig scene_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw LoadError("scene: expected an object");
  SceneConfig s;
  s.task = doc.value("task", s.task);
  s.arm_model = existing_file(doc, "arm_model", base_dir);
  s.hand_model = existing_file(doc, "hand_model", base_dir);
  s.mapping = existing_file(doc, "mapping", base_dir);
  const Json& mount = require(doc, "hand_mount", "scene");
  s.mount_parent = require(mount, "parent", "scene.hand_mount").get<std::string>();
  s.hand_mount = transform_from_json(mount, "scene.hand_mount");
  s.cpn_weights = optional_file(doc, "cpn_weights", base_dir);
  s.ccn_weights = optional_file(doc, "ccn_weights", base_dir);
  if (s.cpn_weights.has_value() != s.ccn_weights.has_value()) {
    throw LoadError("scene: cpn_weights and ccn_weights must be given together");
  }
  s.rate_hz = doc.value("rate_hz", s.rate_hz);
  if (!(s.rate_hz > 0.0)) throw LoadError("scene.rate_hz: must be positive");
  s.gate_threshold = doc.value("gate_threshold", s.gate_threshold);
  if (!(s.gate_threshold >= 0.0 && s.gate_threshold <= 1.0)) {
    throw LoadError("scene.gate_threshold: must lie in [0, 1]");
  }
  s.seed = doc.value("seed", s.seed);
  s.initial_arm = vector_from_json(require(doc, "initial_arm", "scene"), "scene.initial_arm");
  if (doc.contains("initial_hand")) s.initial_hand = vector_from_json(doc.at("initial_hand"), "scene.initial_hand");

  const Json& cal = require(doc, "calibration", "scene");
  s.hand_eye = transform_from_json(require(cal, "hand_eye", "scene.calibration"), "scene.calibration.hand_eye");
  s.fixed_tag = transform_from_json(require(cal, "fixed_tag", "scene.calibration"), "scene.calibration.fixed_tag");
  if (cal.contains("float_tag")) s.float_tag = transform_from_json(cal.at("float_tag"), "scene.calibration.float_tag");

  for (const Json& c : doc.value("cameras", Json::array())) {
    CameraSpec cam;
    cam.name = require(c, "name", "scene.cameras[]").get<std::string>();
    const std::string src = c.value("pose_source", std::string("fixed"));
    if (src == "fixed") {
      cam.pose_source = PoseSource::kFixed;
    } else if (src == "floating") {
      cam.pose_source = PoseSource::kFloating;
    } else {
      throw LoadError("scene.cameras." + cam.name + ".pose_source: expected fixed or floating");
    }
    if (c.contains("intrinsics")) {
      const Json& k = c.at("intrinsics");
      cam.intrinsics = {require_number(k, "fx", "intrinsics"), require_number(k, "fy", "intrinsics"),
                        require_number(k, "cx", "intrinsics"), require_number(k, "cy", "intrinsics")};
    }
    if (c.contains("pose")) cam.pose = transform_from_json(c.at("pose"), "scene.cameras." + cam.name + ".pose");
    for (const CameraSpec& other : s.cameras) {
      if (other.name == cam.name) throw LoadError("scene.cameras: duplicate name '" + cam.name + "'");
    }
    s.cameras.push_back(std::move(cam));
  }
  return s;
}

SceneConfig load_scene(const std::filesystem::path& path) {
  return scene_from_json(read_json_file(path), path.parent_path());
}

std::filesystem::path bundled_scene_path() { return bundled_data_dir() / "scene.json"; }

TeleopPipeline build_pipeline(const SceneConfig& scene) {
  const KinematicModel arm = load_model(scene.arm_model);
  const KinematicModel hand = load_model(scene.hand_model);
  const int parent = arm.joint_index(scene.mount_parent);
  if (parent < 0) throw LoadError("scene.hand_mount.parent: unknown arm joint '" + scene.mount_parent + "'");

  TeleopPipeline p;
  p.robot = attach(arm, parent, scene.hand_mount, hand, "hand/");
  p.hand_offset = arm.joint_count();
  p.hand_joints = hand.joint_count();
  p.flange_joint = parent;
  p.mapping = load_mapping(scene.mapping, hand);
  if (scene.cpn_weights) {
    p.cpn = load_network(*scene.cpn_weights);
    p.ccn = load_network(*scene.ccn_weights);
    const auto n = static_cast<Eigen::Index>(hand.joint_count());
    if (p.cpn->input_size() != n || p.cpn->output_size() != static_cast<Eigen::Index>(hand.link_count())) {
      throw LoadError("scene.cpn_weights: network shape does not match the hand model");
    }
    if (p.ccn->input_size() != n || p.ccn->output_size() != n) {
      throw LoadError("scene.ccn_weights: network shape does not match the hand model");
    }
  }
  p.gate_threshold = scene.gate_threshold;

  if (scene.initial_arm.size() != static_cast<Eigen::Index>(arm.joint_count())) {
    throw LoadError("scene.initial_arm: expected " + std::to_string(arm.joint_count()) + " values");
  }
  JointConfig hand_q = scene.initial_hand.value_or(hand.clamp(hand.zero_config()));
  if (hand_q.size() != static_cast<Eigen::Index>(hand.joint_count())) {
    throw LoadError("scene.initial_hand: expected " + std::to_string(hand.joint_count()) + " values");
  }
  p.initial.resize(static_cast<Eigen::Index>(p.robot.joint_count()));
  p.initial << scene.initial_arm, hand_q;
  if (!p.robot.within_limits(p.initial)) throw LoadError("scene: initial configuration violates joint limits");
  if (in_self_collision(p.robot, p.initial)) throw LoadError("scene: initial configuration is in self-collision");
  return p;
}

FrameGraph build_frame_graph(const SceneConfig& scene) {
  FrameGraph g;
  g.set_hand_eye(scene.hand_eye);
  g.observe({frames::kFixedCam, scene.fixed_tag});
  if (scene.float_tag) g.observe({frames::kFloatCam, *scene.float_tag});
  for (const CameraSpec& cam : scene.cameras) {
    if (cam.pose_source == PoseSource::kFixed && cam.pose) {
      g.set_edge(frames::kBase, cam.name, *cam.pose, EdgeSource::kHandEye);
    }
  }
  return g;
}

std::optional<RigidTransform> camera_pose(const SceneConfig& scene, const FrameGraph& graph, const std::string& name) {
  for (const CameraSpec& cam : scene.cameras) {
    if (cam.name != name) continue;
    if (cam.pose_source == PoseSource::kFloating) return graph.lookup(frames::kBase, frames::kFloatCam);
    if (cam.pose) return graph.lookup(frames::kBase, cam.name);
    return graph.lookup(frames::kBase, frames::kFixedCam);
  }
  return std::nullopt;
}

}  // namespace telephantom
