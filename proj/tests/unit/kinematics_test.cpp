#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fk_oracle.hpp"
#include "telephantom/error.hpp"
#include "telephantom/model_io.hpp"

namespace {

using namespace telephantom;

KinematicModel single_joint(const RigidTransform& origin = RigidTransform::identity()) {
  return KinematicModel({{"j", kRootFrame, origin, Vec3::UnitZ(), -3, 3, 1}}, {});
}

TEST(ForwardKinematics, ZeroConfigSingleJointIsIdentity) {
  const auto frames = forward_kinematics(single_joint(), JointConfig::Zero(1));
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_TRUE(frames[0].is_approx(RigidTransform::identity(), 0.0));
}

TEST(ForwardKinematics, QuarterTurnRotatesChildPoint) {
  const KinematicModel m({{"a", kRootFrame, RigidTransform::identity(), Vec3::UnitZ(), -3, 3, 1},
                          {"b", 0, RigidTransform::from_translation(Vec3(1, 0, 0)), Vec3::UnitZ(), -3, 3, 1}},
                         {});
  JointConfig q(2);
  q << std::numbers::pi / 2, 0.0;
  const auto frames = forward_kinematics(m, q);
  EXPECT_TRUE(frames[1].translation().isApprox(Vec3(0, 1, 0), 1e-15));
  EXPECT_TRUE((frames[0] * Vec3(1, 0, 0)).isApprox(Vec3(0, 1, 0), 1e-15));
}

TEST(ForwardKinematics, RandomChainMatchesMatrixOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    // Chain of five joints: every joint hangs from the previous one.
    std::vector<JointSpec> joints;
    for (int i = 0; i < 5; ++i) {
      std::uniform_real_distribution<double> u(-0.4, 0.4);
      joints.push_back({"j" + std::to_string(i), i - 1,
                        RigidTransform(oracle::random_rotation(rng), Vec3(u(rng), u(rng), u(rng))),
                        oracle::random_unit(rng), -3, 3, 1});
    }
    const KinematicModel m(joints, {});
    const JointConfig q = oracle::random_config(m, rng);
    const auto frames = forward_kinematics(m, q);
    const auto truth = oracle::brute_force_fk(m, q);
    for (std::size_t j = 0; j < frames.size(); ++j) EXPECT_LT(oracle::max_abs_diff(frames[j], truth[j]), 1e-12);
  }
}

TEST(ForwardKinematics, ShuffledTreesMatchMatrixOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const KinematicModel m = oracle::random_tree(rng);
    const JointConfig q = oracle::random_config(m, rng);
    const auto frames = forward_kinematics(m, q);
    const auto truth = oracle::brute_force_fk(m, q);
    for (std::size_t j = 0; j < frames.size(); ++j) EXPECT_LT(oracle::max_abs_diff(frames[j], truth[j]), 1e-12);
  }
}

TEST(ForwardKinematics, LengthMismatchThrows) {
  EXPECT_THROW(forward_kinematics(single_joint(), JointConfig::Zero(2)), DimensionError);
}

TEST(KinematicModel, TopologicalOrderPutsParentsFirst) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const KinematicModel m = oracle::random_tree(rng);
    std::vector<int> seen(m.joint_count(), 0);
    for (int j : m.topological_order()) {
      const int p = m.joint(static_cast<std::size_t>(j)).parent;
      if (p >= 0) {
        EXPECT_TRUE(seen[static_cast<std::size_t>(p)]);
      }
      seen[static_cast<std::size_t>(j)] = 1;
    }
  }
}

TEST(KinematicModel, ValidationNamesTheField) {
  auto expect_error = [](std::vector<JointSpec> joints, const std::string& needle) {
    try {
      KinematicModel m(std::move(joints), {});
      ADD_FAILURE() << "expected LoadError mentioning " << needle;
    } catch (const LoadError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error({{"a", kRootFrame, {}, Vec3(1, 1, 0), -1, 1, 1}}, "joints[0].axis");
  expect_error({{"a", kRootFrame, {}, Vec3::UnitZ(), 1, 1, 1}}, "joints[0].lower");
  expect_error({{"a", kRootFrame, {}, Vec3::UnitZ(), -1, 1, 0}}, "joints[0].max_velocity");
  expect_error({{"a", 1, {}, Vec3::UnitZ(), -1, 1, 1}, {"b", 0, {}, Vec3::UnitZ(), -1, 1, 1}}, "cycle");
  expect_error({{"a", 4, {}, Vec3::UnitZ(), -1, 1, 1}}, "joints[0].parent");
}

TEST(KinematicModel, LimitsHelpers) {
  const KinematicModel m = bundled_hand();
  const JointConfig lo = m.lower_limits(), hi = m.upper_limits();
  EXPECT_TRUE(m.within_limits(lo));
  EXPECT_TRUE(m.within_limits(hi));
  EXPECT_FALSE(m.within_limits(hi.array() + 0.01));
  EXPECT_TRUE(m.within_limits(m.clamp(hi.array() + 5.0)));
  EXPECT_EQ(m.clamp(hi.array() + 5.0), hi);
}

TEST(ModelIo, BundledModelsLoad) {
  const KinematicModel hand = bundled_hand();
  EXPECT_EQ(hand.joint_count(), 16u);
  EXPECT_EQ(hand.link_count(), 13u);
  const KinematicModel arm = bundled_arm();
  EXPECT_EQ(arm.joint_count(), 6u);
}

TEST(ModelIo, JsonRoundTripPreservesFkAndHash) {
  const KinematicModel hand = bundled_hand();
  const KinematicModel again = model_from_json(model_to_json(hand));
  EXPECT_EQ(model_hash(hand), model_hash(again));
  std::mt19937_64 rng(14);
  const JointConfig q = oracle::random_config(hand, rng);
  const auto a = forward_kinematics(hand, q), b = forward_kinematics(again, q);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_TRUE(a[j].is_approx(b[j], 0.0));
}

TEST(ModelIo, RejectsUnknownParentName) {
  Json doc = model_to_json(bundled_arm());
  doc["joints"][1]["parent"] = "nope";
  EXPECT_THROW(model_from_json(doc), LoadError);
}

TEST(Attach, MergedModelMatchesSeparateFk) {
  const KinematicModel arm = bundled_arm(), hand = bundled_hand();
  const RigidTransform mount = RigidTransform::from_translation(Vec3(0.03, 0, 0));
  const int flange = arm.joint_index("flange_roll");
  const KinematicModel robot = attach(arm, flange, mount, hand, "hand/");
  ASSERT_EQ(robot.joint_count(), 22u);
  EXPECT_EQ(robot.joint_index("hand/index_mcp"), 6 + hand.joint_index("index_mcp"));

  std::mt19937_64 rng(15);
  const JointConfig qa = oracle::random_config(arm, rng), qh = oracle::random_config(hand, rng);
  JointConfig q(22);
  q << qa, qh;
  const auto merged = forward_kinematics(robot, q);
  const auto fa = forward_kinematics(arm, qa);
  const auto fh = forward_kinematics(hand, qh);
  for (std::size_t j = 0; j < fh.size(); ++j) {
    EXPECT_TRUE(merged[6 + j].is_approx(fa[static_cast<std::size_t>(flange)] * mount * fh[j], 1e-12));
  }
}

}  // namespace
