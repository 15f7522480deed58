#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fmvol {

enum class Errc {
  // data
  NonMonotoneTimes,
  NonFiniteValue,
  TooFewPoints,
  HorizonViolation,
  HorizonMismatch,
  TooFewObservations,
  ParseError,
  JoinMismatch,
  // configuration
  InvalidFrequencies,
  CutoffExceedsCoefficients,
  ZeroFrequencyRequested,
  InvalidCorrelation,
  CorrelationNotPSD,
  NonPositiveInit,
  InvalidSpec,
  InvalidConfig,
  EmptyTaus,
  // numerical
  InsufficientCoefficients,
  NumericalFailure,
};

/// Coarse classification used by the command line front end to pick exit codes.
enum class ErrorKind { Config, Data, Numeric };

std::string_view to_string(Errc code) noexcept;
ErrorKind kind_of(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }

 private:
  Errc code_;
};

}  // namespace fmvol
