#include <algorithm>
#include <cmath>
#include <vector>

#include "telephantom/collision_net.hpp"
#include "telephantom/error.hpp"

namespace telephantom {
namespace {

double bce_term(double p, double t) {
  const double pc = std::clamp(p, kBceClip, 1.0 - kBceClip);
  return -(t * std::log(pc) + (1.0 - t) * std::log(1.0 - pc));
}

double bce_slope(double p, double t) {
  if (p < kBceClip || p > 1.0 - kBceClip) return 0.0;
  return (p - t) / (p * (1.0 - p));
}

}  // namespace

double cpn_loss(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& labels) {
  if (probs.rows() != labels.rows() || probs.cols() != labels.cols()) {
    throw DimensionError("cpn_loss: probability and label shapes differ");
  }
  if (probs.size() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index c = 0; c < probs.cols(); ++c) {
    for (Eigen::Index r = 0; r < probs.rows(); ++r) sum += bce_term(probs(r, c), labels(r, c));
  }
  return sum / static_cast<double>(probs.size());
}

double cpn_loss(const Eigen::VectorXd& probs, const Eigen::VectorXd& labels) {
  return cpn_loss(Eigen::MatrixXd(probs), Eigen::MatrixXd(labels));
}

CcnLoss ccn_loss(const Eigen::MatrixXd& q, const Eigen::MatrixXd& q_hat, const NetworkParams& cpn,
                 double alpha, double beta) {
  if (q.rows() != q_hat.rows() || q.cols() != q_hat.cols()) {
    throw DimensionError("ccn_loss: q and q_hat shapes differ");
  }
  CcnLoss out;
  out.mse = (q_hat - q).squaredNorm() / static_cast<double>(q.size());
  const Eigen::MatrixXd p = forward(cpn, q_hat);
  out.collision = p.sum() / static_cast<double>(p.size());
  out.total = alpha * out.mse + beta * out.collision;
  return out;
}

CcnLoss ccn_loss(const JointConfig& q, const JointConfig& q_hat, const NetworkParams& cpn, double alpha,
                 double beta) {
  return ccn_loss(Eigen::MatrixXd(q), Eigen::MatrixXd(q_hat), cpn, alpha, beta);
}

double cpn_loss_and_gradients(const NetworkParams& cpn, const Eigen::MatrixXd& configs,
                              const Eigen::MatrixXd& labels, ParamGradients& grads) {
  ForwardTape tape;
  const Eigen::MatrixXd p = forward(cpn, configs, tape);
  const double loss = cpn_loss(p, labels);
  const double scale = 1.0 / static_cast<double>(p.size());
  Eigen::MatrixXd grad(p.rows(), p.cols());
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    for (Eigen::Index r = 0; r < p.rows(); ++r) grad(r, c) = scale * bce_slope(p(r, c), labels(r, c));
  }
  backward(cpn, tape, grad, &grads);
  return loss;
}

CcnLoss ccn_loss_and_gradients(const NetworkParams& ccn, const NetworkParams& cpn,
                               const Eigen::MatrixXd& configs, double alpha, double beta,
                               ParamGradients& grads) {
  ForwardTape ccn_tape;
  const Eigen::MatrixXd q_hat = forward(ccn, configs, ccn_tape);
  ForwardTape cpn_tape;
  const Eigen::MatrixXd p = forward(cpn, q_hat, cpn_tape);

  CcnLoss out;
  const double n_q = static_cast<double>(q_hat.size());
  const double n_p = static_cast<double>(p.size());
  out.mse = (q_hat - configs).squaredNorm() / n_q;
  out.collision = p.sum() / n_p;
  out.total = alpha * out.mse + beta * out.collision;

  Eigen::MatrixXd grad_q_hat = (2.0 * alpha / n_q) * (q_hat - configs);
  if (beta != 0.0) {
    const Eigen::MatrixXd grad_p = Eigen::MatrixXd::Constant(p.rows(), p.cols(), beta / n_p);
    grad_q_hat += backward(cpn, cpn_tape, grad_p, nullptr);
  }
  backward(ccn, ccn_tape, grad_q_hat, &grads);
  return out;
}

NetworkParams make_cpn(const KinematicModel& model, std::span<const int> hidden, std::mt19937_64& rng) {
  std::vector<int> sizes{static_cast<int>(model.joint_count())};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(static_cast<int>(model.link_count()));
  NetworkParams p = make_mlp(sizes, Activation::kRelu, Activation::kSigmoid, rng);
  const auto lo = model.lower_limits();
  const auto hi = model.upper_limits();
  p.input = InputNormalization{0.5 * (lo + hi), 0.5 * (hi - lo)};
  return p;
}

NetworkParams make_ccn(const KinematicModel& model, std::span<const int> hidden, std::mt19937_64& rng,
                       bool residual) {
  const int n = static_cast<int>(model.joint_count());
  std::vector<int> sizes{n};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(n);
  NetworkParams p = make_mlp(sizes, Activation::kRelu, Activation::kIdentity, rng);
  if (residual) {
    // Start as the identity map; training learns the correction.
    p.layers.back().weights *= 0.01;
  }
  const auto lo = model.lower_limits();
  const auto hi = model.upper_limits();
  p.input = InputNormalization{0.5 * (lo + hi), 0.5 * (hi - lo)};
  p.output = RangeSquash{lo, hi, residual};
  return p;
}

Eigen::VectorXd cpn_forward(const NetworkParams& cpn, const JointConfig& q) { return forward_one(cpn, q); }

JointConfig ccn_forward(const NetworkParams& ccn, const JointConfig& q) { return forward_one(ccn, q); }

CorrectionResult correct(const JointConfig& q, const NetworkParams& cpn, const NetworkParams& ccn,
                         double gate_threshold) {
  CorrectionResult r;
  r.cpn_probs = cpn_forward(cpn, q);
  r.was_gated = r.cpn_probs.size() > 0 && r.cpn_probs.maxCoeff() >= gate_threshold;
  r.corrected = r.was_gated ? ccn_forward(ccn, q) : q;
  return r;
}

}  // namespace telephantom
