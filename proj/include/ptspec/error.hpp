#pragma once

#include <stdexcept>
#include <string>

namespace ptspec {

/// Failure categories. The C API and the CLI map these onto status/exit codes.
enum class ErrorKind {
  invalid_argument,     ///< malformed or out-of-range input
  dimension,            ///< shapes or bases do not agree
  oddness_violation,    ///< potential is not odd
  unbounded_potential,  ///< a sup-norm was required but the potential has none
  numerical,            ///< eigensolver failure, residual contract violated
  tolerance_ambiguity,  ///< a rank decision is too close to its threshold
  empty_window,         ///< no eigenvalue survives the truncation comparison
  degenerate_frame,     ///< Gram-Schmidt pivot collapsed
  inconsistency,        ///< two independent routes disagree (a bug, not data)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// True for kinds that indicate a usage problem rather than a numerical one.
bool is_usage_error(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::invalid_argument, what);
}

}  // namespace ptspec
