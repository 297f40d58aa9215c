#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "telephantom/json_io.hpp"

namespace telephantom {

enum class Activation { kIdentity, kRelu, kSigmoid, kTanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::kIdentity;
};

/// x = (q - center) / half_range, applied before the first layer.
struct InputNormalization {
  Eigen::VectorXd center;
  Eigen::VectorXd half_range;
};

/// Output squashing onto a box: y = center + half_range * tanh(z), where z is
/// the last layer output plus, when `residual` is set, atanh of the normalized
/// input (so an all-zero last layer reproduces the input). Requires the input
/// normalization to describe the same box.
struct RangeSquash {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  bool residual = false;
};

/// Dense multilayer perceptron plus optional input/output affine wrappers.
/// Batches are column-major: one sample per column.
struct NetworkParams {
  std::vector<DenseLayer> layers;
  std::optional<InputNormalization> input;
  std::optional<RangeSquash> output;

  Eigen::Index input_size() const { return layers.front().weights.cols(); }
  Eigen::Index output_size() const { return layers.back().weights.rows(); }
  std::size_t parameter_count() const;
  /// Throws DimensionError if layer sizes do not chain or the wrappers do not
  /// match, and Error if any parameter is non-finite.
  void validate() const;
};

/// Per-layer activations recorded by forward() for backward().
struct ForwardTape {
  Eigen::MatrixXd input;               // after normalization
  std::vector<Eigen::MatrixXd> post;   // post-activation output of each layer
  Eigen::MatrixXd squash_arg;          // z fed to tanh when output squashing is present
  Eigen::MatrixXd output;
};

struct ParamGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;

  static ParamGradients zeros_like(const NetworkParams& params);
  void set_zero();
};

Eigen::MatrixXd forward(const NetworkParams& params, const Eigen::MatrixXd& batch);
Eigen::MatrixXd forward(const NetworkParams& params, const Eigen::MatrixXd& batch, ForwardTape& tape);
Eigen::VectorXd forward_one(const NetworkParams& params, const Eigen::VectorXd& x);

/// Reverse pass. `grad_output` is dL/d(output) for the batch in `tape`.
/// Parameter gradients are accumulated into `grads` when non-null; the return
/// value is dL/d(raw input) before normalization.
Eigen::MatrixXd backward(const NetworkParams& params, const ForwardTape& tape,
                         const Eigen::MatrixXd& grad_output, ParamGradients* grads);

/// Fully connected net with `hidden` activation on every hidden layer and
/// `output` on the last; He-uniform weights for ReLU layers, Glorot-uniform
/// otherwise, zero biases.
NetworkParams make_mlp(std::span<const int> sizes, Activation hidden, Activation output,
                       std::mt19937_64& rng);

/// Adam with bias-corrected moment estimates.
class AdamOptimizer {
 public:
  AdamOptimizer(const NetworkParams& params, double learning_rate, double beta1 = 0.9,
                double beta2 = 0.999, double epsilon = 1e-8);
  void step(NetworkParams& params, const ParamGradients& grads);
  std::int64_t steps() const { return t_; }

 private:
  double lr_, b1_, b2_, eps_;
  std::int64_t t_ = 0;
  ParamGradients m_, v_;
};

inline constexpr int kNetworkFormatVersion = 1;

/// {"format_version":1, "layers":[{rows, cols, weights:[row-major], bias, activation}],
///  "input":{center, half_range}?, "output":{type:"range_squash", lower, upper, residual}?}
Json network_to_json(const NetworkParams& params);
NetworkParams network_from_json(const Json& doc);
void save_network(const NetworkParams& params, const std::filesystem::path& path);
NetworkParams load_network(const std::filesystem::path& path);

}  // namespace telephantom
