#pragma once

// Central finite differences over every network parameter.

#include <functional>
#include <vector>

#include "telephantom/network.hpp"

namespace oracle {

inline std::vector<double*> parameter_slots(telephantom::NetworkParams& net) {
  std::vector<double*> out;
  for (auto& layer : net.layers) {
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) out.push_back(layer.weights.data() + i);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) out.push_back(layer.bias.data() + i);
  }
  return out;
}

inline std::vector<double> flatten(const telephantom::ParamGradients& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < g.weights[l].size(); ++i) out.push_back(g.weights[l].data()[i]);
    for (Eigen::Index i = 0; i < g.bias[l].size(); ++i) out.push_back(g.bias[l].data()[i]);
  }
  return out;
}

inline std::vector<double> central_difference(telephantom::NetworkParams net,
                                              const std::function<double(const telephantom::NetworkParams&)>& loss,
                                              double h = 1e-6) {
  std::vector<double> out;
  for (double* slot : parameter_slots(net)) {
    const double keep = *slot;
    *slot = keep + h;
    const double up = loss(net);
    *slot = keep - h;
    const double down = loss(net);
    *slot = keep;
    out.push_back((up - down) / (2 * h));
  }
  return out;
}

/// |a - b| / max(|a| + |b|, floor) measured on the whole vector.
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-12) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(na) + std::sqrt(nb), floor);
}

}  // namespace oracle
