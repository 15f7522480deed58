#pragma once

#include <string>

namespace fmvol {

/// Truncation triple shared by every estimator.
///
/// N truncates the convolution of increment coefficients, M is the Fejer
/// cutoff for first-order spot paths (and the convolution truncation of the
/// second-order estimators), L the Fejer cutoff of second-order spot paths.
struct CuttingFrequencies {
  int N = 1;
  int M = 1;
  int L = 1;

  /// Throws InvalidFrequencies unless N >= M >= L >= 1.
  void validate() const;
  std::string to_string() const;

  friend bool operator==(const CuttingFrequencies&, const CuttingFrequencies&) = default;
};

}  // namespace fmvol
