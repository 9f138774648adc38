#include "edgelab/error.hpp"

namespace edgelab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveRate: return "NonPositiveRate";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DegenerateParameters: return "DegenerateParameters";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BadGeometry: return "BadGeometry";
    case ErrorKind::UnsupportedWindow: return "UnsupportedWindow";
    case ErrorKind::BadContours: return "BadContours";
    case ErrorKind::ContourInfeasible: return "ContourInfeasible";
    case ErrorKind::OverflowGuard: return "OverflowGuard";
    case ErrorKind::ImaginaryResidue: return "ImaginaryResidue";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::NonMonotoneCdf: return "NonMonotoneCdf";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace edgelab
