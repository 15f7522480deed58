#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmvol/fourier.hpp"
#include "fmvol/frequencies.hpp"
#include "fmvol/series.hpp"

namespace fmvol {

/// A real-valued integrated estimate plus the imaginary part discarded from it.
struct Estimate {
  double value = 0.0;
  double imag_residual = 0.0;
  std::vector<std::string> warnings;
};

/// Coefficients of one volatility-matrix entry with the truncation that produced them.
struct VolCoefficients {
  CoefficientVector coeffs;
  int N = 0;
};

/// out_k = T/(2N+1) sum_{|s|<=N} ci_s cj_{k-s}, |k| <= K.
///
/// Requires ci and cj to carry indices up to N + K on the same horizon. The
/// result is hermitian whenever both inputs are.
CoefficientVector convolve(const CoefficientVector& ci, const CoefficientVector& cj, int N, int max_index);

/// Coefficients of Sigma^{ij} up to |k| <= K from increment coefficients.
///
/// For i != j the two orderings of the convolution are averaged: the truncated
/// sum is not symmetric in (i, j) away from k = 0, and averaging makes the
/// estimated matrix symmetric. Passing the same vector twice gives the plain
/// convolution bit-for-bit.
VolCoefficients vol_coefficients(const CoefficientVector& dxi, const CoefficientVector& dxj, int N, int max_index);

/// Spot variance path. Frequencies default to policy::Kind::DefaultVol and the
/// estimation times to 0 : T/(2M) : T. Values at tau = 0 and tau = T are
/// boundary averages of the periodic reconstruction.
SpotPath spot_vol(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs = std::nullopt,
                  std::optional<std::vector<double>> taus = std::nullopt);

/// Spot covariance of two series on the same horizon; grids may differ.
SpotPath spot_cov(const ObservationSeries& first, const ObservationSeries& second,
                  std::optional<CuttingFrequencies> freqs = std::nullopt,
                  std::optional<std::vector<double>> taus = std::nullopt);

/// Spot path from increment coefficients that already cover |k| <= N + M.
SpotPath spot_cov_from_coeffs(const CoefficientVector& dxi, const CoefficientVector& dxj,
                              const CuttingFrequencies& freqs, std::optional<std::vector<double>> taus = std::nullopt);

/// T^2/(2N+1) sum_{|s|<=N} |c_s(dx)|^2. N defaults to floor(n/2).
Estimate integrated_vol(const ObservationSeries& series, std::optional<int> N = std::nullopt);

/// T^2/(2N+1) sum_{|s|<=N} c_s(dx^1) c_{-s}(dx^2). N defaults to floor(min(n1, n2)/2).
Estimate integrated_cov(const ObservationSeries& first, const ObservationSeries& second,
                        std::optional<int> N = std::nullopt);

/// Integrated covariance from precomputed increment coefficients (|k| <= N needed).
Estimate integrated_cov_from_coeffs(const CoefficientVector& dxi, const CoefficientVector& dxj, int N);

/// Post-processing only: replaces negative spot variances by 0 and reports how
/// many were changed. The estimators never clip.
std::size_t clip_negative_variance(SpotPath& path);

void check_same_horizon(const ObservationSeries& first, const ObservationSeries& second);

}  // namespace fmvol
