#pragma once

#include "json.hpp"

#include "fmvol/fourier.hpp"
#include "fmvol/frequencies.hpp"
#include "fmvol/series.hpp"
#include "fmvol/simulate.hpp"

namespace fmvol {

/// {"T": .., "k_min": -K, "k_max": K, "hermitian": .., "coeffs": [[re, im], ...]} for k = -K..K.
nlohmann::json to_json(const CoefficientVector& coeffs);
CoefficientVector coefficients_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpotPath& path);
nlohmann::json to_json(const MeshStats& mesh);
nlohmann::json to_json(const CuttingFrequencies& freqs);

namespace sim {

/// Field names follow the MATLAB-style layout: T, n, parameters (4 x d rows
/// mu/alpha/theta/gamma, one column per asset), Rho (6 entries) or rho (scalar),
/// x0, V0, seed.
nlohmann::json to_json(const HestonSpec& spec);
HestonSpec spec_from_json(const nlohmann::json& j);

}  // namespace sim

}  // namespace fmvol
