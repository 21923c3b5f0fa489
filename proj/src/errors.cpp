#include "forcing/errors.hpp"

namespace forcing {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPoset: return "InvalidPoset";
    case ErrorKind::ImproperFilter: return "ImproperFilter";
    case ErrorKind::ChainNotDescending: return "ChainNotDescending";
    case ErrorKind::SupportEscapeViolation: return "SupportEscapeViolation";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::ZeroRestriction: return "ZeroRestriction";
    case ErrorKind::MixedAlgebras: return "MixedAlgebras";
    case ErrorKind::TooManyAtoms: return "TooManyAtoms";
    case ErrorKind::RankExceeded: return "RankExceeded";
    case ErrorKind::NotAntichain: return "NotAntichain";
    case ErrorKind::EmptyPool: return "EmptyPool";
    case ErrorKind::EmptyFiber: return "EmptyFiber";
    case ErrorKind::NotMaximalAntichain: return "NotMaximalAntichain";
    case ErrorKind::NonCommuting: return "NonCommuting";
    case ErrorKind::FiberNotRegular: return "FiberNotRegular";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::CommutationFailure: return "CommutationFailure";
    case ErrorKind::CoherenceFailure: return "CoherenceFailure";
    case ErrorKind::NotAntichainAtStage: return "NotAntichainAtStage";
    case ErrorKind::NotEager: return "NotEager";
    case ErrorKind::NotPredense: return "NotPredense";
    case ErrorKind::NotMaximal: return "NotMaximal";
    case ErrorKind::NotInCarrier: return "NotInCarrier";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnresolvedReference: return "UnresolvedReference";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

}  // namespace forcing
