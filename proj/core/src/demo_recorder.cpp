#include "telephantom/demo_recorder.hpp"

#include <fstream>
#include <sstream>

#include "telephantom/error.hpp"

namespace telephantom {

inline constexpr int kDemoFormatVersion = 1;

PhaseCounts DemoRecord::counts() const {
  PhaseCounts c;
  for (const DemoSample& s : samples) {
    switch (s.phase) {
      case Phase::kLive: ++c.live; break;
      case Phase::kPreview: ++c.preview; break;
      case Phase::kExecuting: ++c.executing; break;
    }
  }
  return c;
}

bool DemoRecorder::append(DemoSample sample) {
  if (sample.phase == Phase::kPreview) {
    ++dropped_;
    return false;
  }
  record_.samples.push_back(std::move(sample));
  return true;
}

std::string DemoRecorder::serialize() const { return serialize_demo(record_); }

PhaseCounts DemoRecorder::finalize(const std::filesystem::path& path) const {
  write_text_file(path, serialize());
  return record_.counts();
}

std::string serialize_demo(const DemoRecord& record) {
  std::ostringstream out;
  out << Json{{"type", "header"},
              {"format_version", kDemoFormatVersion},
              {"task", record.metadata.task},
              {"seed", record.metadata.seed},
              {"model_hash", record.metadata.model_hash}}
             .dump()
      << '\n';
  for (const DemoSample& s : record.samples) {
    out << Json{{"t", s.t},
                {"phase", to_string(s.phase)},
                {"q", to_json(s.q)},
                {"ee", to_json(s.ee)},
                {"pedal", s.pedal_down ? "down" : "up"}}
               .dump()
        << '\n';
  }
  return out.str();
}

DemoRecord parse_demo(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  DemoRecord record;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(e.what(), line_no);
    }
    try {
      if (!have_header) {
        if (j.value("type", std::string()) != "header") throw LoadError("first line must be the header");
        record.metadata.task = j.value("task", std::string());
        record.metadata.seed = j.value("seed", std::uint64_t{0});
        record.metadata.model_hash = j.value("model_hash", std::string());
        have_header = true;
        continue;
      }
      DemoSample s;
      s.t = require_number(j, "t", "sample");
      s.phase = phase_from_string(require(j, "phase", "sample").get<std::string>());
      s.q = vector_from_json(require(j, "q", "sample"), "q");
      s.ee = transform_from_json(require(j, "ee", "sample"), "ee");
      s.pedal_down = j.value("pedal", std::string("up")) == "down";
      record.samples.push_back(std::move(s));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_header) throw ParseError("missing header line", line_no);
  return record;
}

DemoRecord load_demo(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_demo(buf.str());
}

}  // namespace telephantom
