#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "telephantom/error.hpp"
#include "telephantom/io_streams.hpp"
#include "test_util.hpp"

namespace {

using namespace telephantom;

TEST(CircleWrist, QuadrantsAndTangentFrame) {
  const WristFn w = circle_wrist(0.1, 2.0);
  const std::vector<std::pair<double, Vec3>> expected{
      {0.0, Vec3(0.1, 0, 1)}, {0.5, Vec3(0, 0.1, 1)}, {1.0, Vec3(-0.1, 0, 1)}, {1.5, Vec3(0, -0.1, 1)}};
  for (const auto& [t, p] : expected) {
    const RigidTransform pose = w(t);
    EXPECT_LT((pose.translation() - p).norm(), 1e-12) << "t=" << t;
    // y axis points at the center, z stays up.
    const Vec3 to_center = (Vec3(0, 0, 1) - pose.translation()).normalized();
    EXPECT_LT((pose.rotation_matrix().col(1) - to_center).norm(), 1e-12);
    EXPECT_LT((pose.rotation_matrix().col(2) - Vec3::UnitZ()).norm(), 1e-12);
  }
}

TEST(CircleWrist, ZeroRadiusStaysPut) {
  const WristFn w = circle_wrist(0.0, 1.0, Vec3(1, 2, 3));
  for (double t : {0.0, 0.3, 7.1}) EXPECT_EQ(w(t).translation(), Vec3(1, 2, 3));
  EXPECT_THROW(circle_wrist(-1, 1), DimensionError);
  EXPECT_THROW(circle_wrist(1, 0), DimensionError);
}

TEST(SineFingers, ZeroAmplitudeIsBase) {
  auto base = testutil::relaxed_glove();
  const GloveFn g = sine_fingers(0.0, 2.0, base);
  for (double t : {0.0, 0.25, 1.7}) EXPECT_EQ(g(t), base);
  const GloveFn moving = sine_fingers(0.5, 2.0);
  EXPECT_NEAR(moving(0.5)[0], 0.5, 1e-12);
  EXPECT_NEAR(moving(0.0)[1], 0.5 * std::sin(0.3), 1e-12);
}

TEST(ScriptedSource, SampleCountAndTimes) {
  ScriptedSource src(constant_wrist(RigidTransform::identity()), constant_glove({}), 60.0, 1.0);
  const auto frames = drain(src);
  ASSERT_EQ(frames.size(), 60u);
  EXPECT_EQ(frames.front().t(), 0.0);
  EXPECT_NEAR(frames.back().t(), 59.0 / 60.0, 1e-12);
  EXPECT_FALSE(src.next_frame().has_value());
}

TEST(Trace, RoundTripIsBitExact) {
  const auto frames = testutil::circle_trace(2.0, 0.07, 1.3);
  std::istringstream in(trace_to_string(frames));
  const auto back = parse_trace(in);
  ASSERT_EQ(back.size(), frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    EXPECT_EQ(back[i].wrist.t, frames[i].wrist.t);
    EXPECT_EQ(back[i].wrist.pose.translation(), frames[i].wrist.pose.translation());
    EXPECT_EQ(back[i].wrist.pose.rotation().coeffs(), frames[i].wrist.pose.rotation().coeffs());
    EXPECT_EQ(back[i].glove.angles, frames[i].glove.angles);
  }
  EXPECT_EQ(trace_to_string(back), trace_to_string(frames));
}

TEST(Trace, FileRoundTripAndTraceSource) {
  testutil::TempDir dir;
  const auto frames = testutil::static_trace(0.5);
  record_trace(dir / "t.jsonl", frames);
  TraceSource src = TraceSource::open(dir / "t.jsonl", 30.0);
  EXPECT_EQ(src.kind(), SourceKind::kTrace);
  EXPECT_EQ(src.rate_hz(), 30.0);
  EXPECT_EQ(drain(src).size(), frames.size());
  EXPECT_EQ(src.cursor(), frames.size());
  EXPECT_THROW(load_trace(dir / "missing.jsonl"), Error);
}

TEST(Trace, ParseErrorReportsLine) {
  const auto frames = testutil::static_trace(0.1);
  std::string text = trace_to_string(frames);
  std::istringstream bad_json(text + "{oops\n");
  try {
    parse_trace(bad_json);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), frames.size() + 1);
  }
  // Repeat the first frame at the end: its timestamp goes backwards.
  const std::string first = text.substr(0, text.find('\n') + 1);
  std::istringstream backwards(text + first);
  try {
    parse_trace(backwards);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), frames.size() + 1);
  }
  std::istringstream short_glove(R"({"t":0,"wrist":{"quat":[1,0,0,0],"pos":[0,0,0]},"glove":[1,2]})");
  EXPECT_THROW(parse_trace(short_glove), ParseError);
}

TEST(LiveSource, ZeroOrderHold) {
  LiveSource src(50.0);
  EXPECT_FALSE(src.next_frame().has_value());
  InputFrame f;
  f.wrist.t = 10.0;
  f.glove.angles[0] = 1.0;
  src.push(f);
  const auto a = src.next_frame();
  const auto b = src.next_frame();
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->t(), 10.0);
  EXPECT_NEAR(b->t(), 10.02, 1e-12);
  EXPECT_EQ(b->glove.angles[0], 1.0);
  f.glove.angles[0] = 2.0;
  f.wrist.t = 99.0;
  src.push(f);
  f.glove.angles[0] = 3.0;
  src.push(f);
  const auto c = src.next_frame();
  EXPECT_EQ(c->glove.angles[0], 3.0);
  EXPECT_NEAR(c->t(), 10.04, 1e-12);
  EXPECT_EQ(c->glove.t, c->wrist.t);
}

TEST(RandomWalk, DeterministicAndClamped) {
  RandomWalkSource::Options o;
  o.duration = 2.0;
  RandomWalkSource a(5, 0.05, o), b(5, 0.05, o), c(6, 0.05, o);
  const auto fa = drain(a), fb = drain(b), fc = drain(c);
  ASSERT_EQ(fa.size(), 120u);
  EXPECT_EQ(trace_to_string(fa), trace_to_string(fb));
  EXPECT_NE(trace_to_string(fa), trace_to_string(fc));
  for (const InputFrame& f : fa) {
    for (double v : f.glove.angles) {
      EXPECT_GE(v, o.glove_lo);
      EXPECT_LE(v, o.glove_hi);
    }
    EXPECT_NEAR(f.wrist.pose.rotation().norm(), 1.0, 1e-12);
  }
}

TEST(SourceKind, Names) {
  EXPECT_EQ(to_string(SourceKind::kTrace), "trace");
  EXPECT_EQ(to_string(SourceKind::kLive), "live");
}

}  // namespace
