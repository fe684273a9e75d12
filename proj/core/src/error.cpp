#include "rftwin/error.hpp"

namespace rftwin {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::DegenerateGeometry: return "degenerate-geometry";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::EmptyTrainingSet: return "empty-training-set";
    case ErrorKind::KTooLarge: return "k-too-large";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::SingleClass: return "single-class";
    case ErrorKind::Io: return "io-error";
    case ErrorKind::MalformedFile: return "malformed-file";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

NonConvergenceError::NonConvergenceError(double residual, std::size_t iterations)
    : Error(ErrorKind::NonConvergence,
            "solver stopped after " + std::to_string(iterations) +
                " iterations with KKT residual " + std::to_string(residual)),
      residual_(residual),
      iterations_(iterations) {}

}  // namespace rftwin
