#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "telephantom/retarget.hpp"

namespace telephantom {

/// One synchronized operator sample. wrist.t and glove.t always agree.
struct InputFrame {
  WristSample wrist;
  GloveSample glove;

  double t() const { return wrist.t; }
};

enum class SourceKind { kTrace, kScripted, kLive };
std::string to_string(SourceKind k);

class InputSource {
 public:
  virtual ~InputSource() = default;
  virtual SourceKind kind() const = 0;
  virtual double rate_hz() const = 0;
  /// Next frame in time order, or nullopt at end of stream.
  virtual std::optional<InputFrame> next_frame() = 0;
};

// ---- traces -------------------------------------------------------------
//
// JSON lines, one frame per line:
//   {"t":0.0,"wrist":{"quat":[w,x,y,z],"pos":[x,y,z]},"glove":[27 numbers]}

Json frame_to_json(const InputFrame& f);
/// Throws LoadError on structural problems (callers add line context).
InputFrame frame_from_json(const Json& j);

std::string trace_to_string(const std::vector<InputFrame>& frames);
/// Throws ParseError carrying the 1-based line number of the offending line,
/// including lines whose timestamp does not increase.
std::vector<InputFrame> parse_trace(std::istream& in);
void record_trace(const std::filesystem::path& path, const std::vector<InputFrame>& frames);
std::vector<InputFrame> load_trace(const std::filesystem::path& path);

class TraceSource final : public InputSource {
 public:
  /// `rate_hz` only informs consumers about the nominal playback rate; frames
  /// are emitted with their recorded timestamps.
  explicit TraceSource(std::vector<InputFrame> frames, double rate_hz = 60.0);
  static TraceSource open(const std::filesystem::path& path, double rate_hz = 60.0);

  SourceKind kind() const override { return SourceKind::kTrace; }
  double rate_hz() const override { return rate_; }
  std::optional<InputFrame> next_frame() override;
  std::size_t cursor() const { return cursor_; }
  std::size_t size() const { return frames_.size(); }

 private:
  std::vector<InputFrame> frames_;
  double rate_;
  std::size_t cursor_ = 0;
};

// ---- scripted -----------------------------------------------------------

using WristFn = std::function<RigidTransform(double t)>;
using GloveFn = std::function<std::array<double, kGloveChannels>(double t)>;

/// Horizontal circle around `center` starting on +x and running
/// counter-clockwise. Orientation is the tangent frame: x along the velocity,
/// z up, y pointing at the center.
WristFn circle_wrist(double radius, double period, const Vec3& center = Vec3(0.0, 0.0, 1.0));
WristFn constant_wrist(const RigidTransform& pose);

/// Every channel oscillates as base[c] + amplitude * sin(2 pi t / period + c * 0.3).
GloveFn sine_fingers(double amplitude, double period, const std::array<double, kGloveChannels>& base = {});
/// Curls the four fingers (MCP, PIP, DIP) together by
/// amplitude * (1 - cos(2 pi t / period)) / 2 on top of `base`. Thumb, spread
/// and roll stay put, so neighbouring fingers never close on each other.
GloveFn flexing_fingers(double amplitude, double period, const std::array<double, kGloveChannels>& base = {});
GloveFn constant_glove(const std::array<double, kGloveChannels>& angles);

class ScriptedSource final : public InputSource {
 public:
  /// Samples at t0 + k / rate_hz for every k with t < t0 + duration.
  ScriptedSource(WristFn wrist, GloveFn glove, double rate_hz, double duration, double t0 = 0.0);

  SourceKind kind() const override { return SourceKind::kScripted; }
  double rate_hz() const override { return rate_; }
  std::optional<InputFrame> next_frame() override;

 private:
  WristFn wrist_;
  GloveFn glove_;
  double rate_;
  double t0_;
  std::size_t count_;
  std::size_t k_ = 0;
};

/// Gaussian random walk of wrist position (std `step` metres per tick) and
/// glove channels (std `step` radians per tick, clamped to [glove_lo, glove_hi]).
/// Orientation walks with rotation-vector increments of std `step`.
class RandomWalkSource final : public InputSource {
 public:
  struct Options {
    double rate_hz = 60.0;
    double duration = 10.0;
    RigidTransform start = RigidTransform::from_translation(Vec3(0.0, 0.0, 1.0));
    std::array<double, kGloveChannels> glove_start{};
    double glove_lo = -0.4;
    double glove_hi = 1.6;
  };

  RandomWalkSource(std::uint64_t seed, double step, Options options);

  SourceKind kind() const override { return SourceKind::kScripted; }
  double rate_hz() const override { return opts_.rate_hz; }
  std::optional<InputFrame> next_frame() override;

 private:
  std::mt19937_64 rng_;
  double step_;
  Options opts_;
  std::size_t count_;
  std::size_t k_ = 0;
  RigidTransform pose_;
  std::array<double, kGloveChannels> glove_;
};

// ---- live ---------------------------------------------------------------

/// Frames pushed from another context (the network) are resampled onto the
/// session clock by zero-order hold: each next_frame() returns the most recent
/// pushed frame restamped at the next session tick.
class LiveSource final : public InputSource {
 public:
  explicit LiveSource(double rate_hz);

  SourceKind kind() const override { return SourceKind::kLive; }
  double rate_hz() const override { return rate_; }
  /// Thread-safe.
  void push(const InputFrame& frame);
  /// nullopt until the first frame has been pushed.
  std::optional<InputFrame> next_frame() override;

 private:
  double rate_;
  mutable std::mutex mu_;
  std::optional<InputFrame> held_;
  std::optional<double> t0_;
  std::size_t k_ = 0;
};

/// Pulls every frame from a finite source.
std::vector<InputFrame> drain(InputSource& source);

}  // namespace telephantom
