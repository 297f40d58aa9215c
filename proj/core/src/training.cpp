#include "telephantom/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "telephantom/error.hpp"

namespace telephantom {
namespace {

constexpr Eigen::Index kEvalChunk = 8192;

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, std::span<const Eigen::Index> idx) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
  return out;
}

// Yields minibatch index lists for one epoch. With oversampling enabled a fixed
// share of every batch is drawn (with replacement) from the positive pool.
class BatchSampler {
 public:
  BatchSampler(std::vector<Eigen::Index> pool, std::vector<Eigen::Index> positives, int batch_size,
               double positive_share)
      : pool_(std::move(pool)), positives_(std::move(positives)), batch_(batch_size), share_(positive_share) {}

  std::vector<std::vector<Eigen::Index>> epoch(std::mt19937_64& rng) {
    std::shuffle(pool_.begin(), pool_.end(), rng);
    const std::size_t b = static_cast<std::size_t>(batch_);
    const std::size_t forced = positives_.empty() ? 0 : static_cast<std::size_t>(std::lround(share_ * b));
    const std::size_t fill = b - forced;
    std::vector<std::vector<Eigen::Index>> batches;
    std::uniform_int_distribution<std::size_t> pick(0, positives_.empty() ? 0 : positives_.size() - 1);
    for (std::size_t start = 0; start < pool_.size(); start += fill) {
      const std::size_t end = std::min(pool_.size(), start + fill);
      std::vector<Eigen::Index> batch(pool_.begin() + static_cast<std::ptrdiff_t>(start),
                                      pool_.begin() + static_cast<std::ptrdiff_t>(end));
      for (std::size_t k = 0; k < forced; ++k) batch.push_back(positives_[pick(rng)]);
      batches.push_back(std::move(batch));
    }
    return batches;
  }

 private:
  std::vector<Eigen::Index> pool_;
  std::vector<Eigen::Index> positives_;
  int batch_;
  double share_;
};

void check_finite(double loss, int epoch) {
  if (!std::isfinite(loss)) throw TrainingError("loss became non-finite", epoch);
}

}  // namespace

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error("training config: learning rate must be positive");
  if (batch_size < 1) throw Error("training config: batch size must be at least 1");
  if (epochs < 1) throw Error("training config: epochs must be at least 1");
  if (alpha < 0.0 || beta < 0.0 || (alpha == 0.0 && beta == 0.0)) {
    throw Error("training config: alpha and beta must be non-negative and not both zero");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0)) {
    throw Error("training config: invalid Adam moment coefficients");
  }
  if (oversample_fraction < 0.0 || oversample_fraction >= 1.0) {
    throw Error("training config: oversample fraction must lie in [0, 1)");
  }
}

std::string TrainingReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,train_loss,val_loss,val_metric\n";
  for (const EpochStats& e : epochs) {
    out << e.epoch << ',' << e.train_loss << ',' << e.val_loss << ',' << e.val_metric << '\n';
  }
  return out.str();
}

void TrainingReport::write_csv(const std::filesystem::path& path) const { write_text_file(path, to_csv()); }

double cpn_accuracy(const NetworkParams& cpn, const CollisionDataset& dataset,
                    const std::vector<Eigen::Index>& idx) {
  if (idx.empty()) return 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  for (std::size_t start = 0; start < idx.size(); start += kEvalChunk) {
    const std::size_t end = std::min(idx.size(), start + static_cast<std::size_t>(kEvalChunk));
    const std::span<const Eigen::Index> chunk(idx.data() + start, end - start);
    const Eigen::MatrixXd p = forward(cpn, gather(dataset.configs, chunk));
    const Eigen::MatrixXd t = gather(dataset.labels, chunk);
    correct += static_cast<std::size_t>(((p.array() >= 0.5) == (t.array() > 0.5)).count());
    total += static_cast<std::size_t>(p.size());
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

TrainedNetwork train_cpn(const KinematicModel& model, const CollisionDataset& dataset,
                         const TrainingConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  if (dataset.labels.rows() != static_cast<Eigen::Index>(model.link_count()) ||
      dataset.configs.rows() != static_cast<Eigen::Index>(model.joint_count())) {
    throw DimensionError("train_cpn: dataset does not match the model");
  }
  const auto train = dataset.indices(Split::kTrain);
  if (train.empty()) throw Error("train_cpn: dataset has no train split");
  auto val = dataset.indices(Split::kVal);
  if (val.empty()) val = train;

  std::vector<Eigen::Index> positives;
  for (Eigen::Index i : train) {
    if (dataset.colliding(i)) positives.push_back(i);
  }
  const double rate = static_cast<double>(positives.size()) / static_cast<double>(train.size());
  const bool oversample = rate < config.min_positive_rate && !positives.empty();

  std::mt19937_64 rng(config.seed);
  TrainedNetwork out;
  out.params = make_cpn(model, config.cpn_hidden, rng);
  out.report.metric_name = "val_accuracy";
  AdamOptimizer adam(out.params, config.learning_rate, config.beta1, config.beta2, config.epsilon);
  ParamGradients grads = ParamGradients::zeros_like(out.params);
  BatchSampler sampler(train, oversample ? positives : std::vector<Eigen::Index>{}, config.batch_size,
                       config.oversample_fraction);
  const Eigen::MatrixXd val_x = gather(dataset.configs, val);
  const Eigen::MatrixXd val_t = gather(dataset.labels, val);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (const auto& batch : sampler.epoch(rng)) {
      grads.set_zero();
      const double loss =
          cpn_loss_and_gradients(out.params, gather(dataset.configs, batch), gather(dataset.labels, batch), grads);
      check_finite(loss, epoch);
      adam.step(out.params, grads);
      loss_sum += loss * static_cast<double>(batch.size());
      seen += batch.size();
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(seen);
    stats.val_loss = cpn_loss(forward(out.params, val_x), val_t);
    check_finite(stats.val_loss, epoch);
    stats.val_metric = cpn_accuracy(out.params, dataset, val);
    out.report.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return out;
}

CorrectionQuality evaluate_correction(const KinematicModel& model, const NetworkParams& ccn,
                                      const Eigen::MatrixXd& configs) {
  CorrectionQuality q;
  q.count = static_cast<std::size_t>(configs.cols());
  if (q.count == 0) return q;
  const Eigen::VectorXd range = model.upper_limits() - model.lower_limits();
  std::size_t collisions = 0;
  double sq = 0.0;
  double rel = 0.0;
  for (Eigen::Index start = 0; start < configs.cols(); start += kEvalChunk) {
    const Eigen::Index len = std::min(kEvalChunk, configs.cols() - start);
    const Eigen::MatrixXd in = configs.middleCols(start, len);
    const Eigen::MatrixXd out = forward(ccn, in);
    for (Eigen::Index c = 0; c < len; ++c) {
      if (in_self_collision(model, out.col(c))) ++collisions;
    }
    sq += (out - in).squaredNorm();
    rel += ((out - in).cwiseAbs().array().colwise() / range.array()).sum();
  }
  const double n = static_cast<double>(q.count);
  q.oracle_collision_rate = static_cast<double>(collisions) / n;
  q.mse = sq / (n * static_cast<double>(configs.rows()));
  q.mean_relative_deviation = rel / (n * static_cast<double>(configs.rows()));
  return q;
}

TrainedNetwork train_ccn(const KinematicModel& model, const CollisionDataset& dataset,
                         const NetworkParams& cpn, const TrainingConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  if (cpn.input_size() != static_cast<Eigen::Index>(model.joint_count())) {
    throw DimensionError("train_ccn: CPN input size does not match the model");
  }
  const auto train = dataset.colliding_indices(Split::kTrain);
  if (train.empty()) throw Error("train_ccn: no colliding configurations in the train split");
  auto val = dataset.colliding_indices(Split::kVal);
  if (val.empty()) val = train;

  std::mt19937_64 rng(config.seed);
  TrainedNetwork out;
  out.params = make_ccn(model, config.ccn_hidden, rng, true);
  out.report.metric_name = "val_oracle_collision_rate";
  AdamOptimizer adam(out.params, config.learning_rate, config.beta1, config.beta2, config.epsilon);
  ParamGradients grads = ParamGradients::zeros_like(out.params);
  BatchSampler sampler(train, {}, config.batch_size, 0.0);
  const Eigen::MatrixXd val_x = gather(dataset.configs, val);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (const auto& batch : sampler.epoch(rng)) {
      grads.set_zero();
      const CcnLoss loss =
          ccn_loss_and_gradients(out.params, cpn, gather(dataset.configs, batch), config.alpha, config.beta, grads);
      check_finite(loss.total, epoch);
      adam.step(out.params, grads);
      loss_sum += loss.total * static_cast<double>(batch.size());
      seen += batch.size();
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(seen);
    stats.val_loss = ccn_loss(val_x, forward(out.params, val_x), cpn, config.alpha, config.beta).total;
    check_finite(stats.val_loss, epoch);
    stats.val_metric = evaluate_correction(model, out.params, val_x).oracle_collision_rate;
    out.report.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return out;
}

std::string GridSearchResult::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "alpha,beta,val_collision_rate,val_mse,feasible\n";
  for (const GridCell& c : table) {
    out << c.alpha << ',' << c.beta << ',' << c.val_collision_rate << ',' << c.val_mse << ','
        << (c.feasible ? 1 : 0) << '\n';
  }
  return out.str();
}

GridSearchResult grid_search(const KinematicModel& model, const CollisionDataset& dataset,
                             const NetworkParams& cpn, std::span<const double> alphas,
                             std::span<const double> betas, const TrainingConfig& config, double mse_cap) {
  if (alphas.empty() || betas.empty()) throw Error("grid_search: alpha and beta grids must be non-empty");
  auto val = dataset.colliding_indices(Split::kVal);
  if (val.empty()) val = dataset.colliding_indices(Split::kTrain);
  const Eigen::MatrixXd val_x = gather(dataset.configs, val);

  GridSearchResult result;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::size_t best_any = best;
  std::vector<NetworkParams> nets;
  for (double a : alphas) {
    for (double b : betas) {
      if (a == 0.0 && b == 0.0) continue;
      TrainingConfig cell_config = config;
      cell_config.alpha = a;
      cell_config.beta = b;
      TrainedNetwork net = train_ccn(model, dataset, cpn, cell_config);
      const CorrectionQuality q = evaluate_correction(model, net.params, val_x);
      GridCell cell{a, b, q.oracle_collision_rate, q.mse, q.mse <= mse_cap};
      const std::size_t k = result.table.size();
      auto better = [&](std::size_t cur) {
        return cur == std::numeric_limits<std::size_t>::max() ||
               cell.val_collision_rate < result.table[cur].val_collision_rate ||
               (cell.val_collision_rate == result.table[cur].val_collision_rate &&
                cell.val_mse < result.table[cur].val_mse);
      };
      if (cell.feasible && better(best)) best = k;
      if (better(best_any)) best_any = k;
      result.table.push_back(cell);
      nets.push_back(std::move(net.params));
    }
  }
  if (result.table.empty()) throw Error("grid_search: every cell had alpha = beta = 0");
  if (best == std::numeric_limits<std::size_t>::max()) {
    result.no_feasible_cell = true;
    best = best_any;
  }
  result.best_alpha = result.table[best].alpha;
  result.best_beta = result.table[best].beta;
  result.best_ccn = std::move(nets[best]);
  return result;
}

}  // namespace telephantom
