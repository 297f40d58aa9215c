#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "telephantom/calibration.hpp"
#include "telephantom/phantom_fsm.hpp"

namespace telephantom {

enum class PoseSource { kFixed, kFloating };

struct CameraSpec {
  std::string name;
  CameraIntrinsics intrinsics;
  PoseSource pose_source = PoseSource::kFixed;
  // Fixed cameras without an explicit base→camera pose sit at the hand-eye
  // calibrated fixed camera.
  std::optional<RigidTransform> pose;
};

/// Scene file schema (paths relative to the scene file):
///   { "task": "pick_cube",
///     "arm_model": "arm.json", "hand_model": "hand.json", "mapping": "hand_mapping.json",
///     "hand_mount": {"parent": "flange_roll", "quat": [..], "pos": [..]},
///     "cpn_weights": "cpn.json" | null, "ccn_weights": "ccn.json" | null,
///     "rate_hz": 60, "gate_threshold": 0.5, "seed": 0,
///     "initial_arm": [..], "initial_hand": [..]?,
///     "calibration": {"hand_eye": T, "fixed_tag": T, "float_tag": T?},
///     "cameras": [{"name", "pose_source": "fixed"|"floating", "intrinsics": {fx,fy,cx,cy}, "pose": T?}] }
/// where T is {"quat":[w,x,y,z],"pos":[x,y,z]}.
struct SceneConfig {
  std::string task = "teleop";
  std::filesystem::path arm_model;
  std::filesystem::path hand_model;
  std::filesystem::path mapping;
  std::string mount_parent;
  RigidTransform hand_mount;
  std::optional<std::filesystem::path> cpn_weights;
  std::optional<std::filesystem::path> ccn_weights;
  double rate_hz = 60.0;
  double gate_threshold = 0.5;
  std::uint64_t seed = 0;
  JointConfig initial_arm;
  std::optional<JointConfig> initial_hand;
  RigidTransform hand_eye;
  RigidTransform fixed_tag;
  std::optional<RigidTransform> float_tag;
  std::vector<CameraSpec> cameras;
};

/// Validates the document and that every referenced file exists; throws LoadError.
SceneConfig scene_from_json(const Json& doc, const std::filesystem::path& base_dir);
SceneConfig load_scene(const std::filesystem::path& path);
std::filesystem::path bundled_scene_path();

/// Loads models, mapping and weights; the hand is attached below the mount
/// parent with joint names prefixed "hand/".
TeleopPipeline build_pipeline(const SceneConfig& scene);
/// Runs the calibration chain in its required order.
FrameGraph build_frame_graph(const SceneConfig& scene);

/// base→camera pose for a named camera, nullopt when the chain has not reached it.
std::optional<RigidTransform> camera_pose(const SceneConfig& scene, const FrameGraph& graph, const std::string& name);

}  // namespace telephantom
