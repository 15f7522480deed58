#include "fmvol/error.hpp"

namespace fmvol {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonMonotoneTimes: return "NonMonotoneTimes";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::HorizonViolation: return "HorizonViolation";
    case Errc::HorizonMismatch: return "HorizonMismatch";
    case Errc::TooFewObservations: return "TooFewObservations";
    case Errc::ParseError: return "ParseError";
    case Errc::JoinMismatch: return "JoinMismatch";
    case Errc::InvalidFrequencies: return "InvalidFrequencies";
    case Errc::CutoffExceedsCoefficients: return "CutoffExceedsCoefficients";
    case Errc::ZeroFrequencyRequested: return "ZeroFrequencyRequested";
    case Errc::InvalidCorrelation: return "InvalidCorrelation";
    case Errc::CorrelationNotPSD: return "CorrelationNotPSD";
    case Errc::NonPositiveInit: return "NonPositiveInit";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::EmptyTaus: return "EmptyTaus";
    case Errc::InsufficientCoefficients: return "InsufficientCoefficients";
    case Errc::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

ErrorKind kind_of(Errc code) noexcept {
  switch (code) {
    case Errc::NonMonotoneTimes:
    case Errc::NonFiniteValue:
    case Errc::TooFewPoints:
    case Errc::HorizonViolation:
    case Errc::HorizonMismatch:
    case Errc::TooFewObservations:
    case Errc::ParseError:
    case Errc::JoinMismatch:
      return ErrorKind::Data;
    case Errc::InsufficientCoefficients:
    case Errc::NumericalFailure:
      return ErrorKind::Numeric;
    default:
      return ErrorKind::Config;
  }
}

}  // namespace fmvol
