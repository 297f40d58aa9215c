#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "telephantom/json_io.hpp"
#include "telephantom/rigid_transform.hpp"

namespace telephantom {

namespace frames {
inline const std::string kBase = "base";
inline const std::string kFixedCam = "fixed_cam";
inline const std::string kTag = "tag";
inline const std::string kFloatCam = "float_cam";
inline const std::string kWorld = "world";
}  // namespace frames

enum class EdgeSource { kHandEye, kTagObservation, kDerived };
std::string to_string(EdgeSource s);

/// Pose of the fiducial tag as reported by one camera (observer → tag).
struct TagObservation {
  std::string observer;
  RigidTransform tag_pose;
  double t = 0.0;
  double noise_sigma = 0.0;  // synthetic rotation noise, informational
};

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

/// base→tag = (base→fixed_cam) ∘ (fixed_cam→tag). Throws FrameMismatchError
/// unless the observation comes from the fixed camera.
RigidTransform solve_tag_to_base(const RigidTransform& base_to_fixed_cam, const TagObservation& obs);

/// base→float_cam = (base→tag) ∘ (float_cam→tag)^-1. Throws FrameMismatchError
/// unless the observation comes from the floating camera.
RigidTransform solve_float_to_base(const RigidTransform& base_to_tag, const TagObservation& obs);

/// Pinhole projection of a base-frame point; BehindCameraError for depth <= 0.
Pixel project_point(const CameraIntrinsics& k, const RigidTransform& base_to_cam, const Vec3& point_in_base);

/// Directed, labelled frame relations acquired in a fixed order:
///   1. hand-eye result base→fixed_cam,
///   2. tag observed by the fixed camera, giving the derived base→tag,
///   3. tag observed by the floating camera, giving the derived base→float_cam.
/// Steps out of order throw OrderViolationError. Step 3 may repeat (the
/// floating camera re-solves on every observation); repeating step 1 or 2
/// invalidates the later derived edges.
class FrameGraph {
 public:
  struct Edge {
    std::string from;
    std::string to;
    RigidTransform transform;  // from→to
    EdgeSource source = EdgeSource::kDerived;
  };

  void set_hand_eye(const RigidTransform& base_to_fixed_cam);
  /// Applies step 2 or 3 depending on the observer and returns the derived edge.
  RigidTransform observe(const TagObservation& obs);

  /// Free-form edge (e.g. a world frame); stored with its reverse.
  void set_edge(const std::string& from, const std::string& to, const RigidTransform& from_to, EdgeSource source);

  /// Composes edges along any path; nullopt when the frames are not connected.
  std::optional<RigidTransform> lookup(const std::string& from, const std::string& to) const;
  bool has_edge(const std::string& from, const std::string& to) const;
  /// Stored edges, one per pair, in the direction they were added.
  std::vector<Edge> edges() const;
  /// Number of acquisition steps completed (0..3).
  int stage() const { return stage_; }

  /// {"frames": {name: {"quat","pos","source"}}} with every frame reachable from base.
  Json snapshot() const;

 private:
  void erase_edge(const std::string& a, const std::string& b);

  std::map<std::pair<std::string, std::string>, Edge> edges_;  // both directions
  std::vector<std::pair<std::string, std::string>> insertion_;
  int stage_ = 0;
};

/// Left-multiplies a rotation drawn from an isotropic Gaussian on the rotation
/// vector (std dev `rotation_sigma`, radians) and adds isotropic Gaussian
/// translation noise (std dev `translation_sigma`, meters).
RigidTransform perturb(const RigidTransform& t, double rotation_sigma, double translation_sigma,
                       std::mt19937_64& rng);

RigidTransform random_transform(std::mt19937_64& rng, double max_translation = 1.0);

/// Ground truth for a calibration rig plus the observations it would produce.
struct SyntheticRig {
  RigidTransform base_to_fixed_cam;
  RigidTransform base_to_tag;
  RigidTransform base_to_float_cam;

  static SyntheticRig random(std::mt19937_64& rng);
  TagObservation fixed_observation(double rotation_sigma, double translation_sigma, std::mt19937_64& rng) const;
  TagObservation float_observation(double rotation_sigma, double translation_sigma, std::mt19937_64& rng) const;
};

}  // namespace telephantom
