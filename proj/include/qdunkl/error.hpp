#pragma once

#include <stdexcept>
#include <string>

namespace qdunkl {

enum class ErrorCode {
  invalid_argument,
  pole,
  non_convergence,
  point_off_lattice,
  tail_not_converged,
  window_too_small,
  not_even,
  not_odd,
  not_compact,
  alpha_not_strict,
  schema,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; the code drives CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), msg_(what) {}
  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return msg_; }

 private:
  ErrorCode code_;
  std::string msg_;
};

}  // namespace qdunkl
