#include "telephantom/error.hpp"
#include "telephantom/network.hpp"

namespace telephantom {

Json network_to_json(const NetworkParams& params) {
  Json layers = Json::array();
  for (const DenseLayer& l : params.layers) {
    Json w = Json::array();
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) w.push_back(l.weights(r, c));
    }
    layers.push_back({{"rows", l.weights.rows()},
                      {"cols", l.weights.cols()},
                      {"weights", std::move(w)},
                      {"bias", to_json(l.bias)},
                      {"activation", to_string(l.activation)}});
  }
  Json doc{{"format_version", kNetworkFormatVersion}, {"layers", std::move(layers)}};
  if (params.input) {
    doc["input"] = {{"center", to_json(params.input->center)}, {"half_range", to_json(params.input->half_range)}};
  }
  if (params.output) {
    doc["output"] = {{"type", "range_squash"},
                     {"lower", to_json(params.output->lower)},
                     {"upper", to_json(params.output->upper)},
                     {"residual", params.output->residual}};
  }
  return doc;
}

NetworkParams network_from_json(const Json& doc) {
  const double version = require_number(doc, "format_version", "");
  if (version != kNetworkFormatVersion) {
    throw LoadError("format_version: unsupported version " + std::to_string(static_cast<int>(version)));
  }
  const Json& layers = require(doc, "layers", "");
  if (!layers.is_array() || layers.empty()) throw LoadError("layers: expected a non-empty array");
  NetworkParams p;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string field = "layers[" + std::to_string(i) + "]";
    const Json& l = layers[i];
    const auto rows = static_cast<Eigen::Index>(require_number(l, "rows", field));
    const auto cols = static_cast<Eigen::Index>(require_number(l, "cols", field));
    if (rows <= 0 || cols <= 0) throw LoadError(field + ": rows and cols must be positive");
    const Eigen::VectorXd w = vector_from_json(require(l, "weights", field), field + ".weights");
    if (w.size() != rows * cols) throw LoadError(field + ".weights: expected rows*cols values");
    DenseLayer layer;
    layer.weights.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) layer.weights(r, c) = w[r * cols + c];
    }
    layer.bias = vector_from_json(require(l, "bias", field), field + ".bias");
    const Json& act = require(l, "activation", field);
    if (!act.is_string()) throw LoadError(field + ".activation: expected a string");
    layer.activation = activation_from_string(act.get<std::string>());
    p.layers.push_back(std::move(layer));
  }
  if (doc.contains("input")) {
    const Json& in = doc.at("input");
    p.input = InputNormalization{vector_from_json(require(in, "center", "input"), "input.center"),
                                 vector_from_json(require(in, "half_range", "input"), "input.half_range")};
  }
  if (doc.contains("output")) {
    const Json& out = doc.at("output");
    if (out.value("type", std::string()) != "range_squash") throw LoadError("output.type: expected range_squash");
    p.output = RangeSquash{vector_from_json(require(out, "lower", "output"), "output.lower"),
                           vector_from_json(require(out, "upper", "output"), "output.upper"),
                           out.value("residual", false)};
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw LoadError(e.what());
  }
  return p;
}

void save_network(const NetworkParams& params, const std::filesystem::path& path) {
  write_text_file(path, network_to_json(params).dump() + "\n");
}

NetworkParams load_network(const std::filesystem::path& path) {
  try {
    return network_from_json(read_json_file(path));
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

}  // namespace telephantom
