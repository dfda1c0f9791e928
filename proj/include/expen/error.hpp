#pragma once

#include <stdexcept>
#include <string>

namespace expen {

enum class ErrorCode {
  InvalidArgument,
  Dimension,
  Numerical,
  Capability,
  Precondition,
  DegenerateProjection,
  SingularMatrix,
  LineSearchFailure,
  NonDescent,
  Io,
};

/// Single exception type for the library; the code drives the C API status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code) noexcept;

}  // namespace expen
