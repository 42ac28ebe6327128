#include "ptspec/error.hpp"

namespace ptspec {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::oddness_violation: return "oddness_violation";
    case ErrorKind::unbounded_potential: return "unbounded_potential";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::tolerance_ambiguity: return "tolerance_ambiguity";
    case ErrorKind::empty_window: return "empty_window";
    case ErrorKind::degenerate_frame: return "degenerate_frame";
    case ErrorKind::inconsistency: return "inconsistency";
  }
  return "unknown";
}

bool is_usage_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::dimension:
    case ErrorKind::oddness_violation:
    case ErrorKind::unbounded_potential:
      return true;
    default:
      return false;
  }
}

}  // namespace ptspec
