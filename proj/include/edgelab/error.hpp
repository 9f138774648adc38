#pragma once

#include <stdexcept>
#include <string>

namespace edgelab {

enum class ErrorKind {
  NonPositiveRate,
  LengthMismatch,
  InvalidArgument,
  LevelOutOfRange,
  ConvergenceFailure,
  DegenerateParameters,
  OutOfRange,
  BadGeometry,
  UnsupportedWindow,
  BadContours,
  ContourInfeasible,
  OverflowGuard,
  ImaginaryResidue,
  TruncationInsufficient,
  NonConvergent,
  EmptySample,
  NonMonotoneCdf,
  ConfigError,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace edgelab
