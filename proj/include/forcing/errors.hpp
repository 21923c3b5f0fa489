#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forcing {

enum class ErrorKind {
  InvalidPoset,
  ImproperFilter,
  ChainNotDescending,
  SupportEscapeViolation,
  ArityMismatch,
  NotRegular,
  ZeroRestriction,
  MixedAlgebras,
  TooManyAtoms,
  RankExceeded,
  NotAntichain,
  EmptyPool,
  EmptyFiber,
  NotMaximalAntichain,
  NonCommuting,
  FiberNotRegular,
  ShapeMismatch,
  CommutationFailure,
  CoherenceFailure,
  NotAntichainAtStage,
  NotEager,
  NotPredense,
  NotMaximal,
  NotInCarrier,
  LabelOutOfRange,
  SyntaxError,
  UnresolvedReference,
  ValidationError,
  UnknownCommand,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as this type; `kind()` is the stable tag,
// `what()` carries the human detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail);

}  // namespace forcing
