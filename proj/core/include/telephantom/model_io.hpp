#pragma once

#include <filesystem>

#include "telephantom/json_io.hpp"
#include "telephantom/kinematics.hpp"

namespace telephantom {

/// Model file schema:
///   { "root": "base",
///     "joints": [ {"name", "parent": <name|index|null>, "origin": {"quat":[w,x,y,z],"pos":[x,y,z]},
///                  "axis":[x,y,z], "lower", "upper", "max_velocity"} ],
///     "links":  [ {"name"?, "joint": <name|index|null>, "capsule": {"a":[..], "b":[..], "radius"},
///                  "mask": [link indices]} ] }
/// Angles in radians, lengths in meters. A null/absent parent or joint means the root frame.
KinematicModel model_from_json(const Json& doc);
Json model_to_json(const KinematicModel& model);
KinematicModel load_model(const std::filesystem::path& path);

/// Stable digest of the canonical JSON form; recorded in demo headers.
std::string model_hash(const KinematicModel& model);

/// Directory holding the bundled hand/arm/mapping/scene files.
/// TELEPHANTOM_DATA_DIR overrides it.
std::filesystem::path bundled_data_dir();
KinematicModel bundled_hand();
KinematicModel bundled_arm();

}  // namespace telephantom
