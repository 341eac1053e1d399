#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lgfrac {

enum class ErrorCode {
  invalid_argument,
  config,
  io,
  out_of_range,
  nonconvergence,
  assembly,
  fit,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// One schema violation, addressed by a dotted field path ("materials.glass.young_modulus_mpa").
struct FieldIssue {
  std::string path;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<FieldIssue> issues);
  ConfigError(std::string path, std::string message)
      : ConfigError(std::vector<FieldIssue>{{std::move(path), std::move(message)}}) {}
  const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

/// Raised by the Newton and box-QP solvers; carries the residual history.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> trace)
      : Error(ErrorCode::nonconvergence, what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace lgfrac
