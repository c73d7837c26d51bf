#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zeroform {

/// Machine-readable error category, reported by the CLI in its error object.
enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  Domain,
  NonFinite,
  BoundaryEvaluation,
  NotPositiveDefinite,
  DegeneratePlane,
  ShapeMismatch,
  Precondition,
  TargetNotModel,
  ExtrapolationDiverged,
  EigenSolverFailure,
  Input,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset)
      : Error(ErrorKind::Syntax,
              message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  /// Byte offset into the parsed text.
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(std::string name)
      : Error(ErrorKind::UnknownIdentifier, "unknown identifier '" + name + "'"),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define ZEROFORM_DEFINE_ERROR(Name, Kind)                   \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& message)               \
        : Error(ErrorKind::Kind, message) {}                \
  };

ZEROFORM_DEFINE_ERROR(DomainError, Domain)
ZEROFORM_DEFINE_ERROR(NonFiniteError, NonFinite)
ZEROFORM_DEFINE_ERROR(BoundaryEvaluation, BoundaryEvaluation)
ZEROFORM_DEFINE_ERROR(NotPositiveDefinite, NotPositiveDefinite)
ZEROFORM_DEFINE_ERROR(DegeneratePlane, DegeneratePlane)
ZEROFORM_DEFINE_ERROR(ShapeMismatch, ShapeMismatch)
ZEROFORM_DEFINE_ERROR(PreconditionError, Precondition)
ZEROFORM_DEFINE_ERROR(TargetNotModel, TargetNotModel)
ZEROFORM_DEFINE_ERROR(ExtrapolationDiverged, ExtrapolationDiverged)
ZEROFORM_DEFINE_ERROR(EigenSolverFailure, EigenSolverFailure)
ZEROFORM_DEFINE_ERROR(InputError, Input)

#undef ZEROFORM_DEFINE_ERROR

}  // namespace zeroform
