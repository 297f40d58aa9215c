#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fk_oracle.hpp"
#include "telephantom/error.hpp"
#include "telephantom/training.hpp"
#include "toy_models.hpp"

namespace {

using namespace telephantom;

// Point-to-segment distance, then a ternary search along the first segment
// (the distance is convex in the segment parameter).
double slow_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  auto point_seg = [&](const Vec3& p) {
    const Vec3 d = q1 - q0;
    const double t = std::clamp((p - q0).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - (q0 + t * d)).norm();
  };
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    if (point_seg(p0 + a * (p1 - p0)) < point_seg(p0 + b * (p1 - p0))) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return point_seg(p0 + lo * (p1 - p0));
}

TEST(Dataset, SingleLinkNeverCollides) {
  const KinematicModel m({{"j", kRootFrame, {}, Vec3::UnitZ(), -1, 1, 1}},
                         {{"l", 0, {Vec3::Zero(), Vec3::UnitX(), 0.1}, {}}});
  const CollisionDataset d = generate_dataset(m, 1, 3);
  ASSERT_EQ(d.size(), 1);
  EXPECT_EQ(d.labels(0, 0), 0.0);
}

TEST(Dataset, DeterministicAcrossRunsAndWorkers) {
  const KinematicModel f = oracle::toy_finger();
  const CollisionDataset a = generate_dataset(f, 5000, 9);
  const CollisionDataset b = generate_dataset(f, 5000, 9);
  DatasetOptions four;
  four.workers = 4;
  const CollisionDataset c = generate_dataset(f, 5000, 9, four);
  EXPECT_EQ(a.configs, b.configs);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.split, b.split);
  EXPECT_EQ(a.configs, c.configs);
  EXPECT_EQ(a.split, c.split);
  EXPECT_NE(a.configs, generate_dataset(f, 5000, 10).configs);
}

TEST(Dataset, SplitFractionsAndLimits) {
  const KinematicModel f = oracle::toy_finger();
  const CollisionDataset d = generate_dataset(f, 10000, 4);
  EXPECT_EQ(d.indices(Split::kTrain).size(), 8000u);
  EXPECT_EQ(d.indices(Split::kVal).size(), 1000u);
  EXPECT_EQ(d.indices(Split::kTest).size(), 1000u);
  for (Eigen::Index i = 0; i < d.size(); ++i) ASSERT_TRUE(f.within_limits(d.configs.col(i)));
}

TEST(Dataset, PositiveRateMatchesRejectionSampler) {
  const KinematicModel f = oracle::toy_finger();
  const CollisionDataset d = generate_dataset(f, 10000, 5);

  // Independent estimate: propose in a box larger than the limits, reject
  // proposals outside them, label with the matrix FK oracle and a slow
  // distance search on the only unmasked pair (proximal, distal).
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> box(-std::numbers::pi, std::numbers::pi);
  int accepted = 0, hits = 0;
  while (accepted < 10000) {
    JointConfig q(3);
    for (int k = 0; k < 3; ++k) q[k] = box(rng);
    if (!f.within_limits(q)) continue;
    ++accepted;
    const auto frames = oracle::brute_force_fk(f, q);
    auto point = [&](int j, const Vec3& local) { return Vec3((frames[static_cast<std::size_t>(j)] * local.homogeneous()).head<3>()); };
    const double dist = slow_segment_distance(point(0, Vec3::Zero()), point(0, Vec3(0.05, 0, 0)), point(2, Vec3::Zero()),
                                              point(2, Vec3(0.05, 0, 0)));
    hits += dist < 0.016 ? 1 : 0;
  }
  const double oracle_rate = static_cast<double>(hits) / accepted;
  EXPECT_GT(oracle_rate, 0.02);
  EXPECT_NEAR(d.positive_rate(), oracle_rate, 0.02);
}

TrainingConfig quick_config() {
  TrainingConfig c;
  c.epochs = 4;
  c.batch_size = 64;
  c.learning_rate = 3e-3;
  c.cpn_hidden = {32, 32};
  c.ccn_hidden = {32, 32};
  c.seed = 7;
  return c;
}

TEST(TrainCpn, LearnsToyFingerAndIsDeterministic) {
  const KinematicModel f = oracle::toy_finger();
  const CollisionDataset d = generate_dataset(f, 6000, 6);
  const TrainedNetwork a = train_cpn(f, d, quick_config());
  const TrainedNetwork b = train_cpn(f, d, quick_config());
  ASSERT_EQ(a.report.epochs.size(), 4u);
  EXPECT_LT(a.report.epochs.back().train_loss, a.report.epochs.front().train_loss);
  for (std::size_t e = 0; e < a.report.epochs.size(); ++e) {
    EXPECT_EQ(a.report.epochs[e].train_loss, b.report.epochs[e].train_loss);
    EXPECT_EQ(a.report.epochs[e].val_loss, b.report.epochs[e].val_loss);
  }
  EXPECT_GT(cpn_accuracy(a.params, d, d.indices(Split::kTest)), 0.9);
  EXPECT_EQ(a.report.to_csv().substr(0, 36), "epoch,train_loss,val_loss,val_metric");
}

TEST(TrainCpn, DivergenceNamesEpoch) {
  const KinematicModel f = oracle::toy_finger();
  const CollisionDataset d = generate_dataset(f, 2000, 6);
  TrainingConfig c = quick_config();
  c.learning_rate = 1e300;
  try {
    train_cpn(f, d, c);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_GE(e.epoch(), 1);
  }
}

TEST(TrainingConfig, Validation) {
  TrainingConfig c;
  c.alpha = 0;
  c.beta = 0;
  EXPECT_THROW(c.validate(), Error);
  c = TrainingConfig{};
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), Error);
  c = TrainingConfig{};
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(TrainCcn, ReducesToyFingerCollisions) {
  const KinematicModel f = oracle::toy_finger();
  const CollisionDataset d = generate_dataset(f, 8000, 8);
  TrainingConfig c = quick_config();
  c.epochs = 8;
  const TrainedNetwork cpn = train_cpn(f, d, c);
  const TrainedNetwork ccn = train_ccn(f, d, cpn.params, c);
  const auto test = d.colliding_indices(Split::kTest);
  ASSERT_FALSE(test.empty());
  const CorrectionQuality q = evaluate_correction(f, ccn.params, d.subset(test).configs);
  EXPECT_EQ(q.count, test.size());
  EXPECT_LT(q.oracle_collision_rate, 0.5);
  EXPECT_LT(q.mean_relative_deviation, 0.3);
  EXPECT_EQ(ccn.report.metric_name.empty(), false);
}

TEST(GridSearch, ReportsEveryCellAndHonoursCap) {
  const KinematicModel f = oracle::toy_finger();
  const CollisionDataset d = generate_dataset(f, 4000, 9);
  TrainingConfig c = quick_config();
  c.epochs = 2;
  const TrainedNetwork cpn = train_cpn(f, d, c);
  const std::vector<double> alphas{1.0, 2.0}, betas{0.0, 5.0};
  const GridSearchResult r = grid_search(f, d, cpn.params, alphas, betas, c, 1e9);
  EXPECT_EQ(r.table.size(), 4u);
  EXPECT_FALSE(r.no_feasible_cell);
  const GridSearchResult none = grid_search(f, d, cpn.params, alphas, betas, c, -1.0);
  EXPECT_TRUE(none.no_feasible_cell);
  EXPECT_NE(r.to_csv().find("alpha"), std::string::npos);
}

}  // namespace
