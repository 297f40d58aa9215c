#include <cmath>

#include "telephantom/error.hpp"
#include "telephantom/network.hpp"

namespace telephantom {
namespace {

constexpr double kAtanhClip = 1.0 - 1e-6;

void apply_activation(Eigen::MatrixXd& z, Activation a) {
  switch (a) {
    case Activation::kIdentity:
      break;
    case Activation::kRelu:
      z = z.cwiseMax(0.0);
      break;
    case Activation::kSigmoid:
      // Split by sign so exp never overflows.
      z = z.unaryExpr([](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      });
      break;
    case Activation::kTanh:
      z = z.array().tanh().matrix();
      break;
  }
}

// d(activation)/d(pre-activation), written in terms of the post-activation value.
Eigen::MatrixXd activation_slope(const Eigen::MatrixXd& post, Activation a) {
  switch (a) {
    case Activation::kIdentity:
      return Eigen::MatrixXd::Ones(post.rows(), post.cols());
    case Activation::kRelu:
      return (post.array() > 0.0).cast<double>().matrix();
    case Activation::kSigmoid:
      return (post.array() * (1.0 - post.array())).matrix();
    case Activation::kTanh:
      return (1.0 - post.array().square()).matrix();
  }
  return {};
}

Eigen::MatrixXd clipped_normalized(const Eigen::MatrixXd& x) {
  return x.cwiseMax(-kAtanhClip).cwiseMin(kAtanhClip);
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
  }
  return "identity";
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity" || s == "linear") return Activation::kIdentity;
  if (s == "relu") return Activation::kRelu;
  if (s == "sigmoid") return Activation::kSigmoid;
  if (s == "tanh") return Activation::kTanh;
  throw LoadError("activation: unknown tag '" + s + "'");
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
  return n;
}

void NetworkParams::validate() const {
  if (layers.empty()) throw DimensionError("network: no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DenseLayer& l = layers[i];
    if (l.weights.rows() != l.bias.size()) {
      throw DimensionError("network: layer " + std::to_string(i) + " bias length does not match rows");
    }
    if (i > 0 && l.weights.cols() != layers[i - 1].weights.rows()) {
      throw DimensionError("network: layer " + std::to_string(i) + " input size does not chain");
    }
    if (!l.weights.allFinite() || !l.bias.allFinite()) {
      throw Error("network: layer " + std::to_string(i) + " has non-finite parameters");
    }
  }
  if (input && (input->center.size() != input_size() || input->half_range.size() != input_size() ||
                (input->half_range.array() <= 0.0).any())) {
    throw DimensionError("network: input normalization does not match input size");
  }
  if (output) {
    if (output->lower.size() != output_size() || output->upper.size() != output_size()) {
      throw DimensionError("network: output squash does not match output size");
    }
    if (output->residual && (!input || input_size() != output_size())) {
      throw DimensionError("network: residual squash needs matching input normalization");
    }
  }
}

ParamGradients ParamGradients::zeros_like(const NetworkParams& params) {
  ParamGradients g;
  for (const auto& l : params.layers) {
    g.weights.push_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
  }
  return g;
}

void ParamGradients::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : bias) b.setZero();
}

Eigen::MatrixXd forward(const NetworkParams& params, const Eigen::MatrixXd& batch, ForwardTape& tape) {
  if (batch.rows() != params.input_size()) {
    throw DimensionError("network: expected input of size " + std::to_string(params.input_size()) +
                         ", got " + std::to_string(batch.rows()));
  }
  if (params.input) {
    tape.input = (batch.colwise() - params.input->center).array().colwise() / params.input->half_range.array();
  } else {
    tape.input = batch;
  }
  tape.post.resize(params.layers.size());
  const Eigen::MatrixXd* a = &tape.input;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const DenseLayer& l = params.layers[i];
    Eigen::MatrixXd z = l.weights * *a;
    z.colwise() += l.bias;
    apply_activation(z, l.activation);
    tape.post[i] = std::move(z);
    a = &tape.post[i];
  }
  if (params.output) {
    const RangeSquash& sq = *params.output;
    tape.squash_arg = *a;
    if (sq.residual) tape.squash_arg += clipped_normalized(tape.input).array().atanh().matrix();
    const Eigen::VectorXd center = 0.5 * (sq.lower + sq.upper);
    const Eigen::VectorXd half = 0.5 * (sq.upper - sq.lower);
    tape.output = (tape.squash_arg.array().tanh().colwise() * half.array()).matrix();
    tape.output.colwise() += center;
    // Rounding in center + half can land one ulp outside the range.
    tape.output = tape.output.cwiseMax(sq.lower.replicate(1, tape.output.cols()))
                      .cwiseMin(sq.upper.replicate(1, tape.output.cols()));
  } else {
    tape.output = *a;
  }
  return tape.output;
}

Eigen::MatrixXd forward(const NetworkParams& params, const Eigen::MatrixXd& batch) {
  ForwardTape tape;
  return forward(params, batch, tape);
}

Eigen::VectorXd forward_one(const NetworkParams& params, const Eigen::VectorXd& x) {
  return forward(params, Eigen::MatrixXd(x)).col(0);
}

Eigen::MatrixXd backward(const NetworkParams& params, const ForwardTape& tape,
                         const Eigen::MatrixXd& grad_output, ParamGradients* grads) {
  Eigen::MatrixXd g = grad_output;
  Eigen::MatrixXd residual_grad;
  if (params.output) {
    const RangeSquash& sq = *params.output;
    const Eigen::VectorXd half = 0.5 * (sq.upper - sq.lower);
    const Eigen::ArrayXXd th = tape.squash_arg.array().tanh();
    g = ((g.array().colwise() * half.array()) * (1.0 - th.square())).matrix();
    if (sq.residual) {
      const Eigen::ArrayXXd x = tape.input.array();
      const Eigen::ArrayXXd inside = (x.abs() < kAtanhClip).cast<double>();
      residual_grad = (g.array() * inside / (1.0 - x.square())).matrix();
    }
  }
  for (std::size_t i = params.layers.size(); i-- > 0;) {
    const DenseLayer& l = params.layers[i];
    const Eigen::MatrixXd& prev = i == 0 ? tape.input : tape.post[i - 1];
    const Eigen::MatrixXd dpre = g.cwiseProduct(activation_slope(tape.post[i], l.activation));
    if (grads) {
      grads->weights[i].noalias() += dpre * prev.transpose();
      grads->bias[i] += dpre.rowwise().sum();
    }
    g = l.weights.transpose() * dpre;
  }
  if (residual_grad.size() > 0) g += residual_grad;
  if (params.input) g = (g.array().colwise() / params.input->half_range.array()).matrix();
  return g;
}

NetworkParams make_mlp(std::span<const int> sizes, Activation hidden, Activation output,
                       std::mt19937_64& rng) {
  if (sizes.size() < 2) throw DimensionError("make_mlp: need at least input and output sizes");
  NetworkParams p;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const int in = sizes[i];
    const int out = sizes[i + 1];
    const Activation act = i + 2 == sizes.size() ? output : hidden;
    const double limit = act == Activation::kRelu ? std::sqrt(6.0 / in) : std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer l;
    l.weights.resize(out, in);
    for (Eigen::Index r = 0; r < out; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) l.weights(r, c) = dist(rng);
    }
    l.bias = Eigen::VectorXd::Zero(out);
    l.activation = act;
    p.layers.push_back(std::move(l));
  }
  return p;
}

AdamOptimizer::AdamOptimizer(const NetworkParams& params, double learning_rate, double beta1,
                             double beta2, double epsilon)
    : lr_(learning_rate),
      b1_(beta1),
      b2_(beta2),
      eps_(epsilon),
      m_(ParamGradients::zeros_like(params)),
      v_(ParamGradients::zeros_like(params)) {}

void AdamOptimizer::step(NetworkParams& params, const ParamGradients& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  const double step = lr_ * std::sqrt(c2) / c1;
  const double eps_hat = eps_ * std::sqrt(c2);
  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = b1_ * m + (1.0 - b1_) * g;
    v = b2_ * v + (1.0 - b2_) * g.cwiseProduct(g);
    param.array() -= step * m.array() / (v.array().sqrt() + eps_hat);
  };
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    update(params.layers[i].weights, grads.weights[i], m_.weights[i], v_.weights[i]);
    update(params.layers[i].bias, grads.bias[i], m_.bias[i], v_.bias[i]);
  }
}

}  // namespace telephantom
