#include "harmsync/error.hpp"

#include <sstream>

namespace harmsync {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::NonPositiveOmega0: return "NonPositiveOmega0";
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::NonFiniteWeight: return "NonFiniteWeight";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::InvalidMode: return "InvalidMode";
    case ErrorKind::OscillatorShortCircuit: return "OscillatorShortCircuit";
    case ErrorKind::InconsistentShort: return "InconsistentShort";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::NotPassive: return "NotPassive";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

namespace {

std::string summarize(const std::vector<ValidationIssue>& issues) {
  std::ostringstream os;
  os << "validation failed:";
  for (const auto& issue : issues) os << "\n  " << to_string(issue.kind) << ": " << issue.message;
  return os.str();
}

ErrorKind first_kind(const std::vector<ValidationIssue>& issues) {
  return issues.empty() ? ErrorKind::Parse : issues.front().kind;
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(first_kind(issues), summarize(issues)), issues_(std::move(issues)) {}

}  // namespace harmsync
