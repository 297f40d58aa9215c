#include "telephantom/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "telephantom/model_io.hpp"
#include "telephantom/training.hpp"

namespace telephantom {

Json LatencyHistogram::to_json() const {
  Json b = Json::array();
  for (const LatencyBin& bin : bins) b.push_back({{"lo_us", bin.lo_us}, {"hi_us", bin.hi_us}, {"count", bin.count}});
  return Json{{"iterations", iterations}, {"mean_us", mean_us}, {"median_us", median_us}, {"p90_us", p90_us},
              {"p99_us", p99_us},         {"max_us", max_us},   {"gated", gated},          {"bins", std::move(b)}};
}

std::string LatencyHistogram::to_text() const {
  std::string out;
  const std::size_t peak = bins.empty() ? 1 : std::max_element(bins.begin(), bins.end(), [](auto& a, auto& b) {
                                                return a.count < b.count;
                                              })->count;
  char line[160];
  for (const LatencyBin& bin : bins) {
    if (bin.count == 0) continue;
    const int bar = static_cast<int>(40.0 * static_cast<double>(bin.count) / static_cast<double>(std::max<std::size_t>(peak, 1)));
    std::snprintf(line, sizeof line, "%10.2f - %10.2f us %7zu %s\n", bin.lo_us, bin.hi_us, bin.count,
                  std::string(static_cast<std::size_t>(bar), '#').c_str());
    out += line;
  }
  return out;
}

LatencyHistogram summarize_latencies(std::vector<double> micros) {
  LatencyHistogram h;
  h.iterations = micros.size();
  if (micros.empty()) return h;
  std::sort(micros.begin(), micros.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(micros.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, micros.size() - 1);
    return micros[lo] + (pos - static_cast<double>(lo)) * (micros[hi] - micros[lo]);
  };
  h.mean_us = std::accumulate(micros.begin(), micros.end(), 0.0) / static_cast<double>(micros.size());
  h.median_us = quantile(0.5);
  h.p90_us = quantile(0.9);
  h.p99_us = quantile(0.99);
  h.max_us = micros.back();
  // Four bins per decade from 0.1 us up to the maximum.
  double lo = 0.1;
  while (lo <= h.max_us || h.bins.empty()) {
    const double hi = lo * std::pow(10.0, 0.25);
    h.bins.push_back({lo, hi, 0});
    lo = hi;
  }
  for (double m : micros) {
    auto it = std::find_if(h.bins.begin(), h.bins.end(), [m](const LatencyBin& b) { return m < b.hi_us; });
    if (it == h.bins.end()) --it;
    ++it->count;
  }
  return h;
}

LatencyHistogram measure_pipeline_latency(const MappingTable& mapping, const NetworkParams* cpn,
                                          const NetworkParams* ccn, double gate_threshold, std::size_t iterations,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.1, 1.1);
  std::vector<double> micros;
  micros.reserve(iterations);
  std::size_t gated = 0;
  GloveSample glove;
  double sink = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    glove.angles.fill(0.0);
    for (const JointMapping& m : mapping.joints()) {
      glove.angles[m.glove_channel] = m.glove_min + u(rng) * (m.glove_max - m.glove_min);
    }
    const auto start = std::chrono::steady_clock::now();
    JointConfig q = map_hand(mapping, glove);
    if (cpn && ccn) {
      CorrectionResult r = correct(q, *cpn, *ccn, gate_threshold);
      gated += r.was_gated ? 1 : 0;
      q = std::move(r.corrected);
    }
    const auto stop = std::chrono::steady_clock::now();
    sink += q.sum();
    micros.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
  }
  LatencyHistogram h = summarize_latencies(std::move(micros));
  h.gated = gated;
  if (std::isnan(sink)) h.mean_us = std::numeric_limits<double>::quiet_NaN();
  return h;
}

double endpoint_error(const MappingTable& table) {
  double err = 0.0;
  for (const JointMapping& m : table.joints()) {
    const double at_min = m.apply_unclamped(m.glove_min);
    const double at_max = m.apply_unclamped(m.glove_max);
    const double want_min = m.direction > 0 ? m.robot_min : m.robot_max;
    const double want_max = m.direction > 0 ? m.robot_max : m.robot_min;
    err = std::max({err, std::abs(at_min - want_min), std::abs(at_max - want_max)});
  }
  return err;
}

Json EndpointCheck::to_json() const {
  return Json{{"tables", tables}, {"joints", joints}, {"max_error", max_error}, {"passed", passed}};
}

EndpointCheck check_endpoint_property(std::size_t tables, std::uint64_t seed, double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> njoints(1, 24);
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.05, 3.0);
  std::bernoulli_distribution flip(0.5);
  EndpointCheck check;
  check.tables = tables;
  for (std::size_t t = 0; t < tables; ++t) {
    const int n = njoints(rng);
    Eigen::VectorXd lower(n), upper(n);
    std::vector<JointCorrespondence> corr;
    for (int i = 0; i < n; ++i) {
      const double c = center(rng), w = width(rng);
      lower[i] = c - w / 2;
      upper[i] = c + w / 2;
      const double gc = center(rng), gw = width(rng);
      corr.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i) % kGloveChannels, flip(rng) ? -1 : 1,
                      gc - gw / 2, gc + gw / 2});
    }
    check.max_error = std::max(check.max_error, endpoint_error(build_mapping(corr, lower, upper)));
    check.joints += static_cast<std::size_t>(n);
  }
  check.passed = check.max_error <= tolerance;
  return check;
}

Json evaluate_scene(const SceneConfig& scene, const EvalOptions& options) {
  const TeleopPipeline p = build_pipeline(scene);
  Json report;
  const NetworkParams* cpn = p.cpn ? &*p.cpn : nullptr;
  const NetworkParams* ccn = p.ccn ? &*p.ccn : nullptr;
  report["latency"] =
      measure_pipeline_latency(p.mapping, cpn, ccn, p.gate_threshold, options.latency_iterations, options.seed).to_json();
  report["endpoint"] = check_endpoint_property(options.endpoint_tables, options.seed).to_json();
  report["scene_mapping_endpoint_error"] = endpoint_error(p.mapping);
  report["cpn"] = nullptr;
  report["ccn"] = nullptr;
  if (cpn && ccn) {
    const KinematicModel hand = load_model(scene.hand_model);
    const CollisionDataset data = generate_dataset(hand, options.dataset_size, options.seed ^ 0x5eedULL);
    std::vector<Eigen::Index> all(static_cast<std::size_t>(data.size()));
    std::iota(all.begin(), all.end(), Eigen::Index{0});
    report["cpn"] = {{"accuracy", cpn_accuracy(*cpn, data, all)}, {"samples", data.size()}};
    std::vector<Eigen::Index> hits;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      if (data.colliding(i)) hits.push_back(i);
    }
    const CorrectionQuality q = evaluate_correction(hand, *ccn, data.subset(hits).configs);
    report["ccn"] = {{"oracle_collision_rate", q.oracle_collision_rate},
                     {"mean_relative_deviation", q.mean_relative_deviation},
                     {"mse", q.mse},
                     {"count", q.count}};
  }
  return report;
}

}  // namespace telephantom
