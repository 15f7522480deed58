#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fmvol/series.hpp"

namespace fmvol::sim {

/// Per-asset Heston parameters: dx = (mu - v/2) dt + sqrt(v) dW,
/// dv = theta (alpha - v) dt + gamma sqrt(v) dZ.
struct HestonParams {
  double mu = 0.0;     ///< drift
  double alpha = 0.0;  ///< long-run variance
  double theta = 1.0;  ///< mean-reversion speed
  double gamma = 0.0;  ///< volatility of variance
};

/// Simulation set-up for one or two assets.
///
/// `rho` holds the single price/variance correlation for one asset, or the six
/// driver correlations [rho12, rho13, rho14, rho23, rho24, rho34] for two,
/// with drivers ordered (W1, W2, Z1, Z2) = (x1, x2, v1, v2).
struct HestonSpec {
  double horizon = 1.0;
  int steps = 23400;
  std::vector<HestonParams> assets;
  std::vector<double> rho;
  std::vector<double> x0;
  std::vector<double> v0;
  std::uint64_t seed = 0;

  std::size_t dimension() const noexcept { return assets.size(); }
  void validate() const;

  /// Bivariate set-up used for the reference experiments: T = 1, n = 23400,
  /// (mu, alpha, theta, gamma) = (0, 0.4, 2, 1) for both assets,
  /// rho = [0.5, -0.5, 0, 0, -0.5, 0.5], x0 = log 100, v0 = 0.4.
  static HestonSpec reference_bivariate(std::uint64_t seed);
};

struct SimulatedPath {
  std::vector<double> times;             ///< n + 1 equispaced points on [0, T]
  std::vector<std::vector<double>> x;    ///< per asset
  std::vector<std::vector<double>> v;    ///< per asset, max(v, 0) of the Euler state
  std::vector<std::size_t> truncations;  ///< per asset, steps whose raw variance went negative
  double horizon = 1.0;

  ObservationSeries series(std::size_t asset) const;
  ObservationSeries variance_series(std::size_t asset) const;
};

/// Lower-triangular L with L L^T = C for a symmetric positive semidefinite C.
/// Zero pivots are allowed; throws CorrelationNotPSD otherwise.
std::vector<std::vector<double>> correlation_factor(const std::vector<std::vector<double>>& corr);

/// 4x4 driver correlation matrix from the 6-entry vector.
std::vector<std::vector<double>> driver_correlation(const std::vector<double>& rho);

/// Full-truncation Euler scheme, one asset, corr(dW, dZ) = rho.
SimulatedPath heston_1d(const HestonSpec& spec);
/// Full-truncation Euler scheme, two assets, four correlated drivers.
SimulatedPath heston_2d(const HestonSpec& spec);
/// Dispatches on spec.dimension().
SimulatedPath simulate(const HestonSpec& spec);

/// Path-wise reference values computed from the simulated variance paths with
/// the trapezoidal rule.
struct TrueIntegrated {
  std::vector<double> variance;    ///< int v_j dt
  std::vector<double> quarticity;  ///< int v_j^2 dt
  std::vector<double> leverage;    ///< rho_{x_j, v_j} gamma_j int v_j dt
  std::vector<double> volvol;      ///< gamma_j^2 int v_j dt
  double covariance = 0.0;         ///< rho12 int sqrt(v1 v2) dt (two assets only)
};

TrueIntegrated true_integrated_quantities(const SimulatedPath& path, const HestonSpec& spec);

/// Trapezoidal rule on an arbitrary grid.
double trapezoid(const std::vector<double>& times, const std::vector<double>& values);

/// Driver normal number `driver` at step `step`, as consumed by the simulators.
double driver_normal(std::uint64_t seed, std::size_t dimension, std::size_t step, std::size_t driver);

}  // namespace fmvol::sim
