#include <sstream>

#include <gtest/gtest.h>

#include "telephantom/error.hpp"
#include "telephantom/replay.hpp"
#include "telephantom/session.hpp"
#include "test_util.hpp"

namespace {

using namespace telephantom;

const SceneConfig& scene() {
  static const SceneConfig s = load_scene(bundled_scene_path());
  return s;
}

TEST(Replay, NoPedalIsAllLive) {
  const auto trace = testutil::static_trace(2.0);
  const ReplayResult r = replay(scene(), trace, {});
  const PhaseCounts c = r.demo.counts();
  EXPECT_EQ(c.live, trace.size());
  EXPECT_EQ(c.total(), trace.size());
  EXPECT_EQ(r.summary.ticks, trace.size());
  EXPECT_EQ(r.summary.preview_intervals, 0u);
  EXPECT_EQ(r.final_state.phase, Phase::kLive);
  EXPECT_EQ(r.demo.metadata.task, "pick_cube");
  EXPECT_FALSE(r.demo.metadata.model_hash.empty());
}

TEST(Replay, PreviewFreezesRobotAndIsNotRecorded) {
  const auto trace = testutil::static_trace(3.0);
  std::optional<JointConfig> before_down, before_up;
  std::size_t preview_ticks = 0;
  const ReplayResult r = replay(scene(), trace, {{1.0, true}, {2.0, false}}, [&](const InputFrame& f, const Session& s) {
    if (f.t() < 1.0) before_down = s.state().robot_q;
    if (f.t() < 2.0) before_up = s.state().robot_q;
    if (f.t() >= 1.0 && f.t() < 2.0) {
      ++preview_ticks;
      EXPECT_EQ(s.state().phase, Phase::kPreview);
    }
  });
  ASSERT_TRUE(before_down && before_up);
  EXPECT_EQ(*before_down, *before_up);
  EXPECT_EQ(r.summary.preview_intervals, 1u);
  EXPECT_EQ(r.demo.counts().preview, 0u);
  EXPECT_EQ(r.demo.counts().total(), trace.size() - preview_ticks);
  EXPECT_NEAR(r.summary.preview_seconds, 1.0, 2.0 / 60.0);
  for (const DemoSample& s : r.demo.samples) EXPECT_FALSE(s.t >= 1.0 && s.t < 2.0) << s.t;
}

TEST(Replay, CommitDrivesRobotToPhantomTarget) {
  const auto trace = testutil::circle_trace(8.0, 0.08, 4.0);
  JointConfig committed;
  std::optional<JointConfig> resumed;
  bool seen_exec = false;
  const ReplayResult r =
      replay(scene(), trace, {{1.0, true}, {2.5, false}}, [&](const InputFrame& f, const Session& s) {
        if (f.t() < 2.5) committed = s.state().phantom_q;
        if (s.state().phase == Phase::kExecuting) seen_exec = true;
        if (seen_exec && !resumed && s.state().phase == Phase::kLive) resumed = s.state().robot_q;
      });
  ASSERT_TRUE(seen_exec);
  ASSERT_TRUE(resumed);
  EXPECT_EQ(r.summary.executions, 1u);
  EXPECT_EQ(*resumed, committed);
  const Session probe(scene());
  EXPECT_TRUE(probe.pipeline().ee_pose(*resumed).is_approx(probe.pipeline().ee_pose(committed), 1e-12));
  EXPECT_GT(r.demo.counts().executing, 0u);
  const Json j = r.summary_json();
  EXPECT_EQ(j["final_phase"], "LIVE");
  EXPECT_TRUE(j.contains("samples"));
}

TEST(Replay, LateAndRejectedPedalEvents) {
  const auto trace = testutil::static_trace(1.0);
  const ReplayResult r = replay(scene(), trace, {{0.5, false}, {5.0, true}});
  EXPECT_EQ(r.summary.rejected_events, 1u);
  EXPECT_EQ(r.final_state.phase, Phase::kPreview);
}

TEST(PedalScript, ParseAndRoundTrip) {
  const std::vector<PedalEvent> ev{{0.5, true}, {1.25, false}};
  std::istringstream in(pedal_script_to_string(ev));
  const auto back = parse_pedal_script(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].t, 1.25);
  EXPECT_FALSE(back[1].down);
  std::istringstream bad("{\"t\":1,\"state\":\"down\"}\n{\"t\":0.5,\"state\":\"up\"}\n");
  try {
    parse_pedal_script(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

class SessionMessages : public ::testing::Test {
 protected:
  Session session{scene()};
  std::vector<InputFrame> frames = testutil::static_trace(1.0);
};

TEST_F(SessionMessages, InputPedalAndErrors) {
  EXPECT_FALSE(session.handle(InputMessage{frames[0]}));
  EXPECT_EQ(session.summary().ticks, 1u);
  const auto err = session.handle(PedalMessage{false});
  ASSERT_TRUE(err);
  EXPECT_EQ(err->code, error_code::kIllegal);
  EXPECT_FALSE(session.handle(PedalMessage{true}));
  EXPECT_EQ(session.state().phase, Phase::kPreview);
  EXPECT_EQ(session.handle(InputMessage{frames[0]})->code, error_code::kIllegal);
}

TEST_F(SessionMessages, Views) {
  EXPECT_EQ(session.view(), "third_person");
  EXPECT_FALSE(session.handle(ViewMessage{"top_down", std::nullopt}));
  EXPECT_EQ(session.view(), "top_down");
  EXPECT_EQ(session.handle(ViewMessage{"nope", std::nullopt})->code, error_code::kUnknownCamera);
  EXPECT_EQ(session.handle(ViewMessage{"top_down", RigidTransform::identity()})->code, error_code::kBadMessage);

  const RigidTransform tag = *session.frame_graph().lookup(frames::kBase, frames::kTag);
  const RigidTransform float_tag = RigidTransform::from_translation(Vec3(0, 0, 0.7));
  EXPECT_FALSE(session.handle(ViewMessage{"floating", float_tag}));
  const RigidTransform cam = *session.frame_graph().lookup(frames::kBase, frames::kFloatCam);
  EXPECT_TRUE(cam.is_approx(tag * float_tag.inverse(), 1e-12));
  EXPECT_EQ(session.view(), "floating");
}

TEST_F(SessionMessages, SnapshotSequenceAndShape) {
  const StateMessage a = session.snapshot();
  const StateMessage b = session.snapshot();
  EXPECT_EQ(b.seq, a.seq + 1);
  EXPECT_EQ(a.robot_q.size(), static_cast<Eigen::Index>(session.pipeline().robot.joint_count()));
  EXPECT_EQ(a.collision.size(), session.pipeline().robot.link_count());
  EXPECT_TRUE(a.frames.contains("tag"));
  EXPECT_EQ(a.view, "third_person");
}

TEST(MessageQueue, PreservesOrder) {
  MessageQueue<int> q;
  for (int i = 0; i < 5; ++i) q.push(i);
  const auto all = q.take_all();
  EXPECT_EQ(all, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_TRUE(q.take_all().empty());
}

}  // namespace
