#include "zeroform/errors.hpp"

namespace zeroform {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::NonFinite: return "NonFiniteError";
    case ErrorKind::BoundaryEvaluation: return "BoundaryEvaluation";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::Precondition: return "PreconditionError";
    case ErrorKind::TargetNotModel: return "TargetNotModel";
    case ErrorKind::ExtrapolationDiverged: return "ExtrapolationDiverged";
    case ErrorKind::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorKind::Input: return "InputError";
  }
  return "Error";
}

}  // namespace zeroform
