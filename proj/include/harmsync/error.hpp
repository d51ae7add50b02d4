#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace harmsync {

enum class ErrorKind {
  NonSymmetric,
  NegativeWeight,
  NonzeroDiagonal,
  NonPositiveOmega0,
  NonPositiveParameter,
  NonFiniteWeight,
  ShapeMismatch,
  NonFiniteState,
  InvalidMode,
  OscillatorShortCircuit,
  InconsistentShort,
  DegreeOverflow,
  NotPassive,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Base exception. `kind` identifies the failure; the message carries 1-based indices
/// where a location is involved.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// One validation problem; i and j are 0-based, -1 when not applicable.
struct ValidationIssue {
  ErrorKind kind;
  long i = -1;
  long j = -1;
  std::string message;
};

/// Collects every problem found while validating an input.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

}  // namespace harmsync
