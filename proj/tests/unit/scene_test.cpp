#include <gtest/gtest.h>

#include "telephantom/error.hpp"
#include "telephantom/json_io.hpp"
#include "telephantom/scene.hpp"
#include "test_util.hpp"

namespace {

using namespace telephantom;

TEST(Scene, BundledSceneLoadsAndBuilds) {
  const SceneConfig scene = load_scene(bundled_scene_path());
  EXPECT_EQ(scene.task, "pick_cube");
  EXPECT_FALSE(scene.cpn_weights.has_value());
  EXPECT_EQ(scene.cameras.size(), 3u);
  const TeleopPipeline p = build_pipeline(scene);
  const KinematicModel hand = bundled_hand();
  EXPECT_EQ(p.hand_joints, hand.joint_count());
  EXPECT_EQ(p.robot.joint_count(), p.hand_offset + p.hand_joints);
  EXPECT_FALSE(p.has_correction());
  EXPECT_EQ(p.robot.joint(p.hand_offset).name.rfind("hand/", 0), 0u);
  EXPECT_EQ(p.robot.joint(static_cast<std::size_t>(p.flange_joint)).name, scene.mount_parent);
  EXPECT_TRUE(p.robot.within_limits(p.initial));
}

TEST(Scene, FrameGraphPlacesTagAndCameras) {
  const SceneConfig scene = load_scene(bundled_scene_path());
  const FrameGraph g = build_frame_graph(scene);
  EXPECT_EQ(g.stage(), 3);
  const auto tag = g.lookup(frames::kBase, frames::kTag);
  ASSERT_TRUE(tag);
  EXPECT_LT((tag->translation() - Vec3(0.6, 0.3, 0.0)).norm(), 1e-6);

  const auto third = camera_pose(scene, g, "third_person");
  ASSERT_TRUE(third);
  EXPECT_TRUE(third->is_approx(scene.hand_eye, 1e-12));
  const auto top = camera_pose(scene, g, "top_down");
  EXPECT_LT((top->translation() - Vec3(0.4, 0, 1.5)).norm(), 1e-12);
  EXPECT_TRUE(camera_pose(scene, g, "floating").has_value());
  EXPECT_FALSE(camera_pose(scene, g, "nope").has_value());

  // The tag is in front of every camera.
  for (const CameraSpec& cam : scene.cameras) {
    EXPECT_NO_THROW(project_point(cam.intrinsics, *camera_pose(scene, g, cam.name), tag->translation())) << cam.name;
  }
}

TEST(Scene, RandomNetworksAttachCorrection) {
  testutil::TempDir dir;
  const TeleopPipeline p = build_pipeline(load_scene(testutil::scene_with_random_networks(dir.path(), 1)));
  EXPECT_TRUE(p.has_correction());
}

class SceneErrors : public ::testing::Test {
 protected:
  void expect_load_error(const Json& doc, const std::string& fragment) {
    try {
      build_pipeline(scene_from_json(doc, dir.path()));
      FAIL() << "expected LoadError mentioning " << fragment;
    } catch (const LoadError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  }
  testutil::TempDir dir;
  Json doc = testutil::bundled_scene_doc();
};

TEST_F(SceneErrors, MissingFile) {
  doc["arm_model"] = "nowhere.json";
  expect_load_error(doc, "scene.arm_model");
}

TEST_F(SceneErrors, HalfTheNetworks) {
  doc["cpn_weights"] = testutil::bundled_scene_doc()["arm_model"];
  expect_load_error(doc, "together");
}

TEST_F(SceneErrors, BadRateAndThreshold) {
  doc["rate_hz"] = 0;
  expect_load_error(doc, "rate_hz");
  doc = testutil::bundled_scene_doc();
  doc["gate_threshold"] = 1.5;
  expect_load_error(doc, "gate_threshold");
}

TEST_F(SceneErrors, UnknownMountParent) {
  doc["hand_mount"]["parent"] = "elbow_of_doom";
  expect_load_error(doc, "hand_mount.parent");
}

TEST_F(SceneErrors, InitialConfiguration) {
  doc["initial_arm"] = Json::array({0, 0});
  expect_load_error(doc, "initial_arm");
  doc = testutil::bundled_scene_doc();
  doc["initial_arm"] = Json::array({100, 0, 0, 0, 0, 0});
  expect_load_error(doc, "limits");
}

TEST_F(SceneErrors, CameraFields) {
  doc["cameras"][0]["pose_source"] = "handheld";
  expect_load_error(doc, "pose_source");
  doc = testutil::bundled_scene_doc();
  doc["cameras"][1]["name"] = doc["cameras"][0]["name"];
  expect_load_error(doc, "duplicate");
}

}  // namespace
