#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fmvol/frequencies.hpp"
#include "fmvol/series.hpp"

namespace fmvol::policy {

enum class Kind {
  DefaultVol,
  DefaultCov,
  DefaultLeverage,
  DefaultVolVol,
  DefaultQuarticity,
  NoisyPreset,
  MeshPreset,
};

/// Exponent applied to N in the mesh preset's M = floor(0.3 N^e).
enum class MeshMExponent {
  Positive,  ///< e = +0.5, same as the univariate noisy preset
  Printed,   ///< e = -0.5; always yields 0 before clamping
};

struct Options {
  /// Apply N <= floor(n/2), M <= N, L <= M and M, L >= 1. Disabling returns the raw floors.
  bool clamp = true;
  MeshMExponent mesh_m_exponent = MeshMExponent::Positive;
};

struct Choice {
  CuttingFrequencies freqs;
  std::vector<std::string> warnings;
};

/// Default frequencies for one estimator family given n increments.
///
///   vol, cov:        N = floor(n/2), M = floor((n/2)^0.5), L = floor((n/2)^0.25)
///   leverage, quart: N = floor(n/2), M = floor((n/2)^0.5), L = floor((n/2)^0.25)
///   volvol:          N = floor(n/2), M = floor((n/2)^0.4), L = floor((n/2)^0.2)
/// For cov pass n = min(n1, n2). Throws TooFewObservations for n < 4.
Choice defaults(Kind kind, std::size_t n, const Options& options = {});
Choice defaults_cov(std::size_t n1, std::size_t n2, const Options& options = {});

/// Tick-data preset: N = floor(5 n^0.5), M = floor(0.3 N^0.5), L = floor(M^0.5).
Choice noisy_preset(std::size_t n, const Options& options = {});

/// Asynchronous covariance preset from the coarser of the two meshes rho:
/// N = floor(20 rho^-0.5), M = floor(0.3 N^e), L = floor(M^0.5).
Choice mesh_preset(const ObservationSeries& first, const ObservationSeries& second,
                   const Options& options = {});
/// Same, from a mesh value and the two sample sizes.
Choice mesh_preset(double mesh, std::size_t n1, std::size_t n2, const Options& options = {});

Kind parse_kind(std::string_view name);
std::string_view to_string(Kind kind) noexcept;

}  // namespace fmvol::policy
