#pragma once

#include <stdexcept>
#include <string>

namespace jacobi {

enum class ErrorKind {
  DimensionMismatch,
  RankDeficient,
  NotPositiveDefinite,
  InvalidHyper,
  InvalidResponse,
  ImproperPosterior,
  NoConvergence,
  Separation,
  InsufficientDraws,
  InsufficientData,
  RateOverflow,
  SchemaMismatch,
  DuplicateShard,
  MissingFeature,
  ParseError,
  ConfigError,
  NonFinite,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the CLI)
/// can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace jacobi
