#pragma once

#include <cstdint>
#include <vector>

#include "telephantom/kinematics.hpp"
#include "telephantom/network.hpp"

namespace telephantom {

enum class Split : std::uint8_t { kTrain, kVal, kTest };

/// Uniformly sampled configurations with their per-link collision labels.
/// Column j of `configs` (joints x n) and of `labels` (links x n, 0/1) is sample j.
struct CollisionDataset {
  Eigen::MatrixXd configs;
  Eigen::MatrixXd labels;
  std::vector<Split> split;

  Eigen::Index size() const { return configs.cols(); }
  bool colliding(Eigen::Index i) const { return labels.col(i).maxCoeff() > 0.5; }
  std::vector<Eigen::Index> indices(Split s) const;
  std::vector<Eigen::Index> colliding_indices(Split s) const;
  /// Fraction of samples with at least one colliding link.
  double positive_rate() const;
  CollisionDataset subset(const std::vector<Eigen::Index>& idx) const;
};

struct DatasetOptions {
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  unsigned workers = 1;
};

/// Each configuration is drawn uniformly per joint within its limits and
/// labelled with check_self_collision. Samples are produced in fixed-size
/// shards, each seeded from (seed, shard index), so the result depends only on
/// the seed and n, never on the worker count.
CollisionDataset generate_dataset(const KinematicModel& model, Eigen::Index n, std::uint64_t seed,
                                  const DatasetOptions& options = {});

inline constexpr double kBceClip = 1e-7;

/// Mean binary cross-entropy over links (and over samples for a batch), with
/// probabilities clipped to [kBceClip, 1 - kBceClip].
double cpn_loss(const Eigen::VectorXd& probs, const Eigen::VectorXd& labels);
double cpn_loss(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& labels);

struct CcnLoss {
  double total = 0.0;
  double mse = 0.0;
  double collision = 0.0;
};

/// alpha * mean_j (q_hat_j - q_j)^2 + beta * mean_i p_i(q_hat), p from the CPN.
CcnLoss ccn_loss(const JointConfig& q, const JointConfig& q_hat, const NetworkParams& cpn, double alpha,
                 double beta);
/// Batch form: both terms averaged over the batch columns as well.
CcnLoss ccn_loss(const Eigen::MatrixXd& q, const Eigen::MatrixXd& q_hat, const NetworkParams& cpn,
                 double alpha, double beta);

/// Loss and accumulated parameter gradients of the CPN on one batch.
double cpn_loss_and_gradients(const NetworkParams& cpn, const Eigen::MatrixXd& configs,
                              const Eigen::MatrixXd& labels, ParamGradients& grads);

/// Loss and CCN parameter gradients on one batch; gradients flow through the
/// frozen CPN, whose parameters are left untouched.
CcnLoss ccn_loss_and_gradients(const NetworkParams& ccn, const NetworkParams& cpn,
                               const Eigen::MatrixXd& configs, double alpha, double beta,
                               ParamGradients& grads);

/// Sigmoid-output prediction network over the model's joints, one output per link.
NetworkParams make_cpn(const KinematicModel& model, std::span<const int> hidden, std::mt19937_64& rng);
/// Correction network whose output is squashed onto the joint limits.
NetworkParams make_ccn(const KinematicModel& model, std::span<const int> hidden, std::mt19937_64& rng,
                       bool residual = true);

Eigen::VectorXd cpn_forward(const NetworkParams& cpn, const JointConfig& q);
JointConfig ccn_forward(const NetworkParams& ccn, const JointConfig& q);

struct CorrectionResult {
  JointConfig corrected;
  bool was_gated = false;
  Eigen::VectorXd cpn_probs;
};

/// Pass-through unless the highest CPN probability reaches `gate_threshold`,
/// in which case the CCN output replaces q.
CorrectionResult correct(const JointConfig& q, const NetworkParams& cpn, const NetworkParams& ccn,
                         double gate_threshold);

}  // namespace telephantom
