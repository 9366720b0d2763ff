#pragma once

#include <stdexcept>
#include <string>

namespace kronpcg {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  Unsupported,
  Numerical,
  Io,
};

/// Exception type thrown by every kronpcg routine. The code is what the C
/// API maps onto its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace kronpcg
