#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace zeno {

/// Broad failure categories. The CLI maps each category onto an exit code.
enum class ErrorCategory {
  validation,  // bad input, bad configuration, geometry or shape mismatch
  numerical,   // non-convergence, zero-probability outcomes, broken invariants
  io,          // unreadable/unwritable files, corrupt or unsupported payloads
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Rejected input. `field()` names the offending parameter when known.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string field = {})
      : Error(ErrorCategory::validation, field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A coordinate or length outside the open interval between the plates.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::validation, what) {}
};

/// A force constraint that admits no grid node.
class EmptyRegionError : public Error {
 public:
  explicit EmptyRegionError(const std::string& what) : Error(ErrorCategory::validation, what) {}
};

/// Vectors, masks or grids that do not line up.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorCategory::validation, what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorCategory::numerical, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A projection, confinement check or survival chain with probability zero.
class ZeroProbabilityError : public Error {
 public:
  explicit ZeroProbabilityError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

class UnsupportedVersionError : public Error {
 public:
  UnsupportedVersionError(const std::string& what, unsigned version)
      : Error(ErrorCategory::io, what), version_(version) {}

  unsigned version() const noexcept { return version_; }

 private:
  unsigned version_;
};

class MalformedInputError : public Error {
 public:
  explicit MalformedInputError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

/// Failure inside one protocol step; keeps the category of the underlying error.
class ProtocolStepError : public Error {
 public:
  ProtocolStepError(const Error& cause, std::size_t step)
      : Error(cause.category(), "step " + std::to_string(step) + ": " + cause.what()), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace zeno
