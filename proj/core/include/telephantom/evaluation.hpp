#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "telephantom/scene.hpp"

namespace telephantom {

struct LatencyBin {
  double lo_us = 0.0;
  double hi_us = 0.0;
  std::size_t count = 0;
};

struct LatencyHistogram {
  std::size_t iterations = 0;
  double mean_us = 0.0;
  double median_us = 0.0;
  double p90_us = 0.0;
  double p99_us = 0.0;
  double max_us = 0.0;
  std::size_t gated = 0;
  std::vector<LatencyBin> bins;  // log-spaced

  Json to_json() const;
  /// Fixed-width text rendering, one row per non-empty bin.
  std::string to_text() const;
};

LatencyHistogram summarize_latencies(std::vector<double> micros);

/// Times map_hand followed by the gated correction (when both networks are
/// given) on random glove readings spread over the calibrated ranges.
LatencyHistogram measure_pipeline_latency(const MappingTable& mapping, const NetworkParams* cpn,
                                          const NetworkParams* ccn, double gate_threshold, std::size_t iterations,
                                          std::uint64_t seed);

struct EndpointCheck {
  std::size_t tables = 0;
  std::size_t joints = 0;
  double max_error = 0.0;  // largest |f(endpoint) - robot limit|
  bool passed = false;

  Json to_json() const;
};

/// Builds `tables` random mapping tables and checks that each glove range
/// endpoint lands on the matching robot limit (swapped for direction -1).
EndpointCheck check_endpoint_property(std::size_t tables, std::uint64_t seed, double tolerance = 1e-9);
/// The same check on an existing table.
double endpoint_error(const MappingTable& table);

struct EvalOptions {
  std::size_t latency_iterations = 10000;
  Eigen::Index dataset_size = 20000;  // fresh samples for network metrics
  std::size_t endpoint_tables = 1000;
  std::uint64_t seed = 1;
};

/// Machine-readable report:
///   {"latency": {...}, "endpoint": {...}, "scene_mapping_endpoint_error": x,
///    "cpn": {"accuracy": a, "samples": n} | null,
///    "ccn": {"oracle_collision_rate", "mean_relative_deviation", "mse", "count"} | null}
Json evaluate_scene(const SceneConfig& scene, const EvalOptions& options);

}  // namespace telephantom
