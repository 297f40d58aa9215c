#include "telephantom/io_streams.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "telephantom/error.hpp"

namespace telephantom {

std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::kTrace: return "trace";
    case SourceKind::kScripted: return "scripted";
    case SourceKind::kLive: return "live";
  }
  return "trace";
}

Json frame_to_json(const InputFrame& f) {
  return Json{{"t", f.wrist.t}, {"wrist", to_json(f.wrist.pose)}, {"glove", f.glove.angles}};
}

InputFrame frame_from_json(const Json& j) {
  if (!j.is_object()) throw LoadError("trace frame must be an object");
  InputFrame f;
  const double t = require_number(j, "t", "frame");
  f.wrist.t = t;
  f.glove.t = t;
  f.wrist.pose = transform_from_json(require(j, "wrist", "frame"), "wrist");
  const Json& g = require(j, "glove", "frame");
  if (!g.is_array() || g.size() != kGloveChannels) {
    throw LoadError("glove must be an array of " + std::to_string(kGloveChannels) + " numbers");
  }
  for (std::size_t c = 0; c < kGloveChannels; ++c) {
    if (!g[c].is_number()) throw LoadError("glove[" + std::to_string(c) + "] is not a number");
    f.glove.angles[c] = g[c].get<double>();
  }
  return f;
}

std::string trace_to_string(const std::vector<InputFrame>& frames) {
  std::string out;
  for (const InputFrame& f : frames) {
    out += frame_to_json(f).dump();
    out += '\n';
  }
  return out;
}

std::vector<InputFrame> parse_trace(std::istream& in) {
  std::vector<InputFrame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    InputFrame f;
    try {
      f = frame_from_json(Json::parse(line));
    } catch (const Json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const LoadError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!frames.empty() && !(f.t() > frames.back().t())) {
      throw ParseError("timestamp does not increase", line_no);
    }
    frames.push_back(f);
  }
  return frames;
}

void record_trace(const std::filesystem::path& path, const std::vector<InputFrame>& frames) {
  write_text_file(path, trace_to_string(frames));
}

std::vector<InputFrame> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string() + ": cannot open file");
  return parse_trace(in);
}

TraceSource::TraceSource(std::vector<InputFrame> frames, double rate_hz)
    : frames_(std::move(frames)), rate_(rate_hz) {
  if (!(rate_hz > 0.0)) throw DimensionError("trace source: rate must be positive");
  for (std::size_t i = 1; i < frames_.size(); ++i) {
    if (!(frames_[i].t() > frames_[i - 1].t())) {
      throw ParseError("timestamp does not increase", i + 1);
    }
  }
}

TraceSource TraceSource::open(const std::filesystem::path& path, double rate_hz) {
  return TraceSource(load_trace(path), rate_hz);
}

std::optional<InputFrame> TraceSource::next_frame() {
  if (cursor_ >= frames_.size()) return std::nullopt;
  return frames_[cursor_++];
}

WristFn circle_wrist(double radius, double period, const Vec3& center) {
  if (!(radius >= 0.0) || !(period > 0.0)) {
    throw DimensionError("circle_wrist: radius must be >= 0 and period > 0");
  }
  return [radius, period, center](double t) {
    const double phi = 2.0 * std::numbers::pi * t / period;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Mat3 r;
    r.col(0) = Vec3(-s, c, 0.0);
    r.col(1) = Vec3(-c, -s, 0.0);
    r.col(2) = Vec3(0.0, 0.0, 1.0);
    return RigidTransform(Quat(r), center + radius * Vec3(c, s, 0.0));
  };
}

WristFn constant_wrist(const RigidTransform& pose) {
  return [pose](double) { return pose; };
}

GloveFn sine_fingers(double amplitude, double period, const std::array<double, kGloveChannels>& base) {
  if (!(amplitude >= 0.0) || !(period > 0.0)) {
    throw DimensionError("sine_fingers: amplitude must be >= 0 and period > 0");
  }
  return [amplitude, period, base](double t) {
    std::array<double, kGloveChannels> out = base;
    if (amplitude == 0.0) return out;
    const double phi = 2.0 * std::numbers::pi * t / period;
    for (std::size_t c = 0; c < kGloveChannels; ++c) out[c] += amplitude * std::sin(phi + 0.3 * static_cast<double>(c));
    return out;
  };
}

GloveFn flexing_fingers(double amplitude, double period, const std::array<double, kGloveChannels>& base) {
  if (!(amplitude >= 0.0) || !(period > 0.0)) {
    throw DimensionError("flexing_fingers: amplitude must be >= 0 and period > 0");
  }
  return [amplitude, period, base](double t) {
    std::array<double, kGloveChannels> out = base;
    const double s = amplitude * (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / period));
    for (std::size_t f = 1; f < 5; ++f) {
      for (std::size_t k = 1; k <= 3; ++k) out[5 * f + k] += s;
    }
    return out;
  };
}

GloveFn constant_glove(const std::array<double, kGloveChannels>& angles) {
  return [angles](double) { return angles; };
}

namespace {

std::size_t tick_count(double rate_hz, double duration) {
  if (!(rate_hz > 0.0)) throw DimensionError("source rate must be positive");
  if (!(duration >= 0.0)) throw DimensionError("source duration must be non-negative");
  return static_cast<std::size_t>(std::ceil(duration * rate_hz - 1e-9));
}

}  // namespace

ScriptedSource::ScriptedSource(WristFn wrist, GloveFn glove, double rate_hz, double duration, double t0)
    : wrist_(std::move(wrist)), glove_(std::move(glove)), rate_(rate_hz), t0_(t0),
      count_(tick_count(rate_hz, duration)) {}

std::optional<InputFrame> ScriptedSource::next_frame() {
  if (k_ >= count_) return std::nullopt;
  const double t = t0_ + static_cast<double>(k_++) / rate_;
  InputFrame f;
  f.wrist = {t, wrist_(t)};
  f.glove = {t, glove_(t)};
  return f;
}

RandomWalkSource::RandomWalkSource(std::uint64_t seed, double step, Options options)
    : rng_(seed), step_(step), opts_(options), count_(tick_count(options.rate_hz, options.duration)),
      pose_(options.start), glove_(options.glove_start) {
  if (!(step > 0.0)) throw DimensionError("random_walk: step must be positive");
}

std::optional<InputFrame> RandomWalkSource::next_frame() {
  if (k_ >= count_) return std::nullopt;
  const double t = static_cast<double>(k_) / opts_.rate_hz;
  if (k_ > 0) {
    std::normal_distribution<double> n(0.0, step_);
    const Vec3 dp(n(rng_), n(rng_), n(rng_));
    const Vec3 dr(n(rng_), n(rng_), n(rng_));
    pose_ = RigidTransform(rotation_exp(dr) * pose_.rotation(), pose_.translation() + dp);
    for (double& g : glove_) g = std::clamp(g + n(rng_), opts_.glove_lo, opts_.glove_hi);
  }
  ++k_;
  InputFrame f;
  f.wrist = {t, pose_};
  f.glove = {t, glove_};
  return f;
}

LiveSource::LiveSource(double rate_hz) : rate_(rate_hz) {
  if (!(rate_hz > 0.0)) throw DimensionError("live source: rate must be positive");
}

void LiveSource::push(const InputFrame& frame) {
  std::lock_guard lock(mu_);
  held_ = frame;
}

std::optional<InputFrame> LiveSource::next_frame() {
  std::lock_guard lock(mu_);
  if (!held_) return std::nullopt;
  if (!t0_) t0_ = held_->t();
  InputFrame f = *held_;
  const double t = *t0_ + static_cast<double>(k_++) / rate_;
  f.wrist.t = t;
  f.glove.t = t;
  return f;
}

std::vector<InputFrame> drain(InputSource& source) {
  std::vector<InputFrame> out;
  while (auto f = source.next_frame()) out.push_back(*f);
  return out;
}

}  // namespace telephantom
