#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "telephantom/json_io.hpp"
#include "telephantom/phantom_fsm.hpp"

namespace telephantom {

struct DemoSample {
  double t = 0.0;
  Phase phase = Phase::kLive;
  JointConfig q;
  RigidTransform ee;
  bool pedal_down = false;
};

struct DemoMetadata {
  std::string task;
  std::uint64_t seed = 0;
  std::string model_hash;
};

struct PhaseCounts {
  std::size_t live = 0;
  std::size_t preview = 0;
  std::size_t executing = 0;

  std::size_t total() const { return live + preview + executing; }
};

struct DemoRecord {
  DemoMetadata metadata;
  std::vector<DemoSample> samples;

  PhaseCounts counts() const;
};

/// Collects demonstration samples; anything tagged PREVIEW is dropped on
/// append so exploratory phantom motion never reaches the file.
///
/// File format (JSON lines): a header line
///   {"type":"header","format_version":1,"task":..,"seed":..,"model_hash":..}
/// followed by one line per sample
///   {"t":..,"phase":"LIVE"|"EXECUTING","q":[..],"ee":{"quat":[w,x,y,z],"pos":[..]},"pedal":"up"|"down"}
class DemoRecorder {
 public:
  explicit DemoRecorder(DemoMetadata metadata) : record_{std::move(metadata), {}} {}

  /// Returns false (and stores nothing) for PREVIEW samples.
  bool append(DemoSample sample);
  std::size_t dropped() const { return dropped_; }
  const DemoRecord& record() const { return record_; }

  std::string serialize() const;
  /// Writes the file and returns the per-phase counts of what was written.
  PhaseCounts finalize(const std::filesystem::path& path) const;

 private:
  DemoRecord record_;
  std::size_t dropped_ = 0;
};

std::string serialize_demo(const DemoRecord& record);
DemoRecord parse_demo(const std::string& text);
DemoRecord load_demo(const std::filesystem::path& path);

}  // namespace telephantom
