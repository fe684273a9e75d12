#pragma once

#include <stdexcept>
#include <string>

namespace rftwin {

enum class ErrorKind {
  InvalidConfig,
  Domain,
  DegenerateGeometry,
  NotPositiveDefinite,
  LengthMismatch,
  DimensionMismatch,
  EmptyTrainingSet,
  KTooLarge,
  NonConvergence,
  SingleClass,
  Io,
  MalformedFile,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so that callers (the
/// CLI in particular) can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the one-class SVM solver when the iteration cap is hit.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(double residual, std::size_t iterations);

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

}  // namespace rftwin
