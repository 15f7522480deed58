#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fmvol/estimators.hpp"
#include "fmvol/fourier.hpp"
#include "fmvol/frequencies.hpp"
#include "fmvol/series.hpp"

namespace fmvol {

enum class SecondOrderKind { Leverage, VolVol, Quarticity };

std::string_view to_string(SecondOrderKind kind) noexcept;

struct SecondOrderCoefficients {
  SecondOrderKind kind;
  CoefficientVector coeffs;
  int N = 0;  ///< truncation of the upstream variance coefficients
  int M = 0;  ///< truncation of the second-level convolution / product
};

/// Normalization of the integrated leverage sum.
enum class LeverageNorm {
  Paper,      ///< T^2/(M+1)
  Symmetric,  ///< T^2/(2M+1), matching the 2M+1 convention of c_k(B)
};

/// Sign of the integrated leverage sum.
enum class LeverageSign {
  Consistent,  ///< -i j (2 pi/T): equals T c_0(B) of the coefficient estimator
  Printed,     ///< +i j (2 pi/T) as in the commonly quoted display; flips the sign of the estimate
};

/// Indices the pipeline must compute before any second-order estimate.
struct CoefficientPlan {
  int increments = 0;  ///< max |k| of c_k(dx)
  int variance = 0;    ///< max |k| of c_k(sigma^2)
};

/// Coefficient demand of a spot (K = L) or integrated (K = 0) second-order
/// estimate; variance coefficients are convolutions truncated at N.
CoefficientPlan plan_coefficients(SecondOrderKind kind, const CuttingFrequencies& freqs, int out_max_index);

// Low-level layer: dx = c(dx) up to M + K, variance = c(sigma^2) up to M + K.

/// c_k(B) = T/(2M+1) sum_{|j|<=M} c_j(dx) c_{k-j}(d sigma^2), with
/// c_j(d sigma^2) = i j (2 pi/T) c_j(sigma^2) (boundary term dropped).
SecondOrderCoefficients leverage_coeffs(const CoefficientVector& dx, const VolCoefficients& variance, int M,
                                        int out_max_index);
/// c_k(C) = T/(2M+1) sum_{|j|<=M} c_j(d sigma^2) c_{k-j}(d sigma^2).
SecondOrderCoefficients volvol_coeffs(const VolCoefficients& variance, int M, int out_max_index);
/// c_k(sigma^4) = sum_{|s|<=M} c_s(sigma^2) c_{k-s}(sigma^2), the product formula.
SecondOrderCoefficients quarticity_coeffs(const VolCoefficients& variance, int M, int out_max_index);

/// T^2/norm sum_{|j|<=M} c_j(dx) c_{-j}(d sigma^2) (1 - |j|/M), where
/// c_{-j}(d sigma^2) = -i j (2 pi/T) c_{-j}(sigma^2).
Estimate integrated_leverage(const CoefficientVector& dx, const VolCoefficients& variance, int M,
                             LeverageNorm norm = LeverageNorm::Paper,
                             LeverageSign sign = LeverageSign::Consistent);
/// T^2/(2M+1) sum_{|j|<=M} j^2 (2 pi/T)^2 (1 - |j|/M) |c_j(sigma^2)|^2; never negative.
Estimate integrated_volvol(const VolCoefficients& variance, int M);
/// T sum_{|s|<=M} |c_s(sigma^2)|^2; never negative.
Estimate integrated_quarticity(const VolCoefficients& variance, int M);

// Series layer. Missing frequencies come from the default policies
// (leverage and quarticity share one, volvol has its own); missing
// estimation times default to 0 : T/(2L) : T.

SecondOrderCoefficients leverage_coeffs(const ObservationSeries& series, const CuttingFrequencies& freqs,
                                        int out_max_index);
SecondOrderCoefficients volvol_coeffs(const ObservationSeries& series, const CuttingFrequencies& freqs,
                                      int out_max_index);
SecondOrderCoefficients quarticity_coeffs(const ObservationSeries& series, const CuttingFrequencies& freqs,
                                          int out_max_index);

SpotPath spot_leverage(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs = std::nullopt,
                       std::optional<std::vector<double>> taus = std::nullopt);
SpotPath spot_volvol(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs = std::nullopt,
                     std::optional<std::vector<double>> taus = std::nullopt);
SpotPath spot_quarticity(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs = std::nullopt,
                         std::optional<std::vector<double>> taus = std::nullopt);

/// Only N and M of `freqs` are used.
Estimate integrated_leverage(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs = std::nullopt,
                             LeverageNorm norm = LeverageNorm::Paper,
                             LeverageSign sign = LeverageSign::Consistent);
Estimate integrated_volvol(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs = std::nullopt);
Estimate integrated_quarticity(const ObservationSeries& series,
                               std::optional<CuttingFrequencies> freqs = std::nullopt);

}  // namespace fmvol
