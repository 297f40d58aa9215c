#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "telephantom/collision_net.hpp"

namespace telephantom {

struct TrainingConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 256;
  int epochs = 50;
  double alpha = 1.0;  // CCN: weight of the MSE term
  double beta = 5.0;   // CCN: weight of the collision term
  std::uint64_t seed = 0;
  std::vector<int> cpn_hidden{128, 128};
  std::vector<int> ccn_hidden{256, 256};
  // Class balancing: below `min_positive_rate` colliding samples, each batch
  // is filled to `oversample_fraction` with colliding samples.
  double min_positive_rate = 0.05;
  double oversample_fraction = 0.3;

  /// Throws Error when the learning rate, batch size, epochs or loss weights are invalid.
  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_metric = 0.0;  // CPN: per-link accuracy at 0.5; CCN: oracle collision rate
};

struct TrainingReport {
  std::string metric_name;
  std::vector<EpochStats> epochs;

  /// "epoch,train_loss,val_loss,val_metric" followed by one row per epoch.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

using EpochCallback = std::function<void(const EpochStats&)>;

struct TrainedNetwork {
  NetworkParams params;
  TrainingReport report;
};

/// Minibatch Adam on the mean BCE over the train split; validation on the val split.
TrainedNetwork train_cpn(const KinematicModel& model, const CollisionDataset& dataset,
                         const TrainingConfig& config, const EpochCallback& on_epoch = {});

/// Per-link classification accuracy at threshold 0.5 over the given samples.
double cpn_accuracy(const NetworkParams& cpn, const CollisionDataset& dataset,
                    const std::vector<Eigen::Index>& idx);

/// Trains the correction network on the colliding train configurations,
/// backpropagating through the frozen CPN. The per-epoch metric is the
/// geometric-oracle collision rate of corrected colliding val configurations.
TrainedNetwork train_ccn(const KinematicModel& model, const CollisionDataset& dataset,
                         const NetworkParams& cpn, const TrainingConfig& config,
                         const EpochCallback& on_epoch = {});

struct CorrectionQuality {
  std::size_t count = 0;
  double oracle_collision_rate = 0.0;
  double mse = 0.0;
  double mean_relative_deviation = 0.0;  // mean |q_hat - q| / joint range
};

/// Applies the CCN (ungated) to each configuration and scores it with the oracle.
CorrectionQuality evaluate_correction(const KinematicModel& model, const NetworkParams& ccn,
                                      const Eigen::MatrixXd& configs);

struct GridCell {
  double alpha = 0.0;
  double beta = 0.0;
  double val_collision_rate = 0.0;
  double val_mse = 0.0;
  bool feasible = false;
};

struct GridSearchResult {
  double best_alpha = 0.0;
  double best_beta = 0.0;
  bool no_feasible_cell = false;  // best cell chosen ignoring the MSE cap
  std::vector<GridCell> table;
  NetworkParams best_ccn;

  std::string to_csv() const;
};

/// One CCN per (alpha, beta) cell; picks the lowest validation collision rate
/// among cells whose validation MSE is at most `mse_cap`.
GridSearchResult grid_search(const KinematicModel& model, const CollisionDataset& dataset,
                             const NetworkParams& cpn, std::span<const double> alphas,
                             std::span<const double> betas, const TrainingConfig& config, double mse_cap);

}  // namespace telephantom
