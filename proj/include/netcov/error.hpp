#pragma once

#include <stdexcept>
#include <string>

namespace netcov {

enum class ErrorCode {
  DuplicateVertex,
  DanglingChildReference,
  IndexOutOfRange,
  DimensionMismatch,
  ParameterRange,
  InvalidDistribution,
  NonBinaryInput,
  WrongArity,
  AsymmetricDistribution,
  DimensionCapExceeded,
  InvalidRealization,
  InvalidProblem,
  Parse,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. Every failure raised by the
/// library derives from this type; the C API maps the code to a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace netcov
