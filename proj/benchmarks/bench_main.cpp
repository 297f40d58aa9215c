#include <random>

#include <benchmark/benchmark.h>

#include "telephantom/collision_net.hpp"
#include "telephantom/model_io.hpp"
#include "telephantom/retarget.hpp"
#include "telephantom/scene.hpp"

using namespace telephantom;

namespace {

JointConfig random_config(const KinematicModel& m, std::mt19937_64& rng) {
  JointConfig q(static_cast<Eigen::Index>(m.joint_count()));
  for (std::size_t i = 0; i < m.joint_count(); ++i) {
    std::uniform_real_distribution<double> u(m.joint(i).lower, m.joint(i).upper);
    q[static_cast<Eigen::Index>(i)] = u(rng);
  }
  return q;
}

const TeleopPipeline& pipeline() {
  static const TeleopPipeline p = build_pipeline(load_scene(bundled_scene_path()));
  return p;
}

void BM_ForwardKinematicsHand(benchmark::State& state) {
  const KinematicModel hand = bundled_hand();
  std::mt19937_64 rng(1);
  const JointConfig q = random_config(hand, rng);
  for (auto _ : state) benchmark::DoNotOptimize(forward_kinematics(hand, q));
}
BENCHMARK(BM_ForwardKinematicsHand);

void BM_ForwardKinematicsArmHand(benchmark::State& state) {
  const KinematicModel& robot = pipeline().robot;
  std::mt19937_64 rng(2);
  const JointConfig q = random_config(robot, rng);
  for (auto _ : state) benchmark::DoNotOptimize(forward_kinematics(robot, q));
}
BENCHMARK(BM_ForwardKinematicsArmHand);

void BM_SelfCollisionHand(benchmark::State& state) {
  const KinematicModel hand = bundled_hand();
  std::mt19937_64 rng(3);
  const JointConfig q = random_config(hand, rng);
  for (auto _ : state) benchmark::DoNotOptimize(check_self_collision(hand, q));
}
BENCHMARK(BM_SelfCollisionHand);

void BM_CapsuleDistance(benchmark::State& state) {
  const Capsule a{Vec3(0, 0, 0), Vec3(1, 0.2, 0), 0.1};
  const Capsule b{Vec3(0.3, 1, 0.2), Vec3(0.5, -1, 0.1), 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(capsule_distance(a, b));
}
BENCHMARK(BM_CapsuleDistance);

void BM_MapHand(benchmark::State& state) {
  const MappingTable& table = pipeline().mapping;
  GloveSample g;
  g.angles.fill(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(map_hand(table, g));
}
BENCHMARK(BM_MapHand);

void BM_MapHandAndCorrect(benchmark::State& state) {
  const KinematicModel hand = bundled_hand();
  std::mt19937_64 rng(4);
  const std::vector<int> cpn_hidden{128, 128};
  const std::vector<int> ccn_hidden{256, 256};
  const NetworkParams cpn = make_cpn(hand, cpn_hidden, rng);
  const NetworkParams ccn = make_ccn(hand, ccn_hidden, rng);
  GloveSample g;
  g.angles.fill(0.5);
  for (auto _ : state) {
    const JointConfig q = map_hand(pipeline().mapping, g);
    benchmark::DoNotOptimize(correct(q, cpn, ccn, 0.0));  // threshold 0: always run the CCN
  }
}
BENCHMARK(BM_MapHandAndCorrect);

void BM_CpnForwardBatch(benchmark::State& state) {
  const KinematicModel hand = bundled_hand();
  std::mt19937_64 rng(5);
  const std::vector<int> hidden{128, 128};
  const NetworkParams cpn = make_cpn(hand, hidden, rng);
  const Eigen::MatrixXd batch = Eigen::MatrixXd::Random(16, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(forward(cpn, batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CpnForwardBatch)->Arg(1)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
