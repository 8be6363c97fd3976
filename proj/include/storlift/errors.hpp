#pragma once

// Error taxonomy and the cooperative per-contract deadline.

#include <chrono>
#include <stdexcept>
#include <string>

namespace storlift {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeoutError : AnalysisError {
  TimeoutError() : AnalysisError("analysis deadline exceeded") {}
};

struct MalformedFact : AnalysisError {
  MalformedFact(const std::string& file, std::size_t line, const std::string& what)
      : AnalysisError(file + ":" + std::to_string(line) + ": " + what), file(file), line(line) {}
  std::string file;
  std::size_t line;
};

struct SchemaError : AnalysisError {
  using AnalysisError::AnalysisError;
};

struct RpcError : AnalysisError {
  using AnalysisError::AnalysisError;
};

// Checked inside every fixpoint/worklist loop; expiry aborts the current
// contract without touching any other job.
class Deadline {
 public:
  Deadline() = default;  // no limit
  explicit Deadline(std::chrono::milliseconds budget)
      : expiry_(std::chrono::steady_clock::now() + budget), armed_(true) {}

  void check() const {
    if (armed_ && std::chrono::steady_clock::now() > expiry_) throw TimeoutError();
  }

 private:
  std::chrono::steady_clock::time_point expiry_{};
  bool armed_ = false;
};

}  // namespace storlift
