#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "telephantom/collision_net.hpp"
#include "telephantom/io_streams.hpp"
#include "telephantom/json_io.hpp"
#include "telephantom/kinematics.hpp"
#include "telephantom/model_io.hpp"
#include "telephantom/network.hpp"
#include "telephantom/scene.hpp"

namespace testutil {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("telephantom-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::array<double, telephantom::kGloveChannels> relaxed_glove() {
  std::array<double, telephantom::kGloveChannels> g{};
  for (std::size_t f = 0; f < 5; ++f) {
    g[5 * f + 1] = 0.4;
    g[5 * f + 2] = 0.4;
  }
  return g;
}

inline std::vector<telephantom::InputFrame> static_trace(double duration, double rate = 60.0) {
  telephantom::ScriptedSource src(
      telephantom::constant_wrist(telephantom::RigidTransform::from_translation(telephantom::Vec3(0.0, 0.0, 1.0))),
      telephantom::constant_glove(relaxed_glove()), rate, duration);
  return telephantom::drain(src);
}

/// Flexion channels of the four fingers oscillate in phase; thumb, spread and
/// roll stay put, so no two fingers close onto each other.
inline telephantom::GloveFn flexing_glove(double amplitude, double period) {
  return telephantom::flexing_fingers(amplitude, period, relaxed_glove());
}

inline std::vector<telephantom::InputFrame> circle_trace(double duration, double radius = 0.05, double period = 4.0,
                                                         double rate = 60.0) {
  telephantom::ScriptedSource src(telephantom::circle_wrist(radius, period), flexing_glove(0.4, period), rate,
                                  duration);
  return telephantom::drain(src);
}

/// Bundled scene document with absolute model paths, so it can be rewritten
/// anywhere.
inline telephantom::Json bundled_scene_doc() {
  telephantom::Json doc = telephantom::read_json_file(telephantom::bundled_scene_path());
  const auto dir = telephantom::bundled_scene_path().parent_path();
  for (const char* key : {"arm_model", "hand_model", "mapping"}) doc[key] = (dir / doc[key].get<std::string>()).string();
  return doc;
}

/// Writes randomly initialised (untrained) networks for the bundled hand and a
/// scene that uses them; returns the scene path.
inline std::filesystem::path scene_with_random_networks(const std::filesystem::path& dir, std::uint64_t seed) {
  const telephantom::KinematicModel hand = telephantom::bundled_hand();
  std::mt19937_64 rng(seed);
  const std::vector<int> hidden{16, 16};
  telephantom::save_network(telephantom::make_cpn(hand, hidden, rng), dir / "cpn.json");
  telephantom::save_network(telephantom::make_ccn(hand, hidden, rng), dir / "ccn.json");
  telephantom::Json doc = bundled_scene_doc();
  doc["cpn_weights"] = "cpn.json";
  doc["ccn_weights"] = "ccn.json";
  const auto path = dir / "scene.json";
  telephantom::write_text_file(path, doc.dump(2));
  return path;
}

}  // namespace testutil
