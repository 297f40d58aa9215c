#pragma once

#include <stdexcept>
#include <string>

namespace telephantom {

// Base class for every error raised by the library. Callers that only care
// about "something went wrong" catch this; the subclasses exist so tests and
// the CLI can tell failure modes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input file (model, mapping, scene, weights).
class LoadError : public Error {
 public:
  using Error::Error;
};

class BuildError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch)
      : Error("epoch " + std::to_string(epoch) + ": " + what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

class FrameMismatchError : public Error {
 public:
  using Error::Error;
};

class OrderViolationError : public Error {
 public:
  using Error::Error;
};

class BehindCameraError : public Error {
 public:
  using Error::Error;
};

class LimitError : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  PlanningError(const std::string& what, double at_time)
      : Error(what), at_time_(at_time) {}
  // Time offset along the straight-line path where the first collision was found.
  double at_time() const noexcept { return at_time_; }

 private:
  double at_time_;
};

// Wire-protocol violation; `code` is the machine-readable tag sent to clients.
class ProtocolError : public Error {
 public:
  ProtocolError(std::string code, const std::string& what) : Error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ServeError : public Error {
 public:
  using Error::Error;
};

}  // namespace telephantom
