#include "fmvol/policies.hpp"

#include <algorithm>
#include <cmath>

#include "fmvol/error.hpp"
#include "fmvol/frequencies.hpp"

namespace fmvol {

void CuttingFrequencies::validate() const {
  if (!(N >= M && M >= L && L >= 1))
    throw Error(Errc::InvalidFrequencies, "cutting frequencies must satisfy N >= M >= L >= 1, got " + to_string());
}

std::string CuttingFrequencies::to_string() const {
  return "(N=" + std::to_string(N) + ", M=" + std::to_string(M) + ", L=" + std::to_string(L) + ")";
}

}  // namespace fmvol

namespace fmvol::policy {

namespace {

int floor_int(double x) { return static_cast<int>(std::floor(x)); }

void require_observations(std::size_t n) {
  if (n < 4)
    throw Error(Errc::TooFewObservations,
                "frequency policies need at least 4 increments, got " + std::to_string(n));
}

/// Enforces N <= floor(n/2) and N >= M >= L >= 1, recording each adjustment.
Choice finish(int N, int M, int L, std::size_t n, const Options& options) {
  Choice choice{{N, M, L}, {}};
  if (!options.clamp) return choice;
  auto& f = choice.freqs;
  auto& w = choice.warnings;
  const int nyquist = static_cast<int>(n / 2);
  if (f.N > nyquist) {
    w.push_back("N=" + std::to_string(f.N) + " clipped to floor(n/2)=" + std::to_string(nyquist));
    f.N = nyquist;
  }
  if (f.N < 1) {
    w.push_back("N=" + std::to_string(f.N) + " raised to 1");
    f.N = 1;
  }
  if (f.M > f.N) {
    w.push_back("M=" + std::to_string(f.M) + " clipped to N=" + std::to_string(f.N));
    f.M = f.N;
  }
  if (f.M < 1) {
    w.push_back("M=" + std::to_string(f.M) + " raised to 1");
    f.M = 1;
  }
  if (f.L > f.M) {
    w.push_back("L=" + std::to_string(f.L) + " clipped to M=" + std::to_string(f.M));
    f.L = f.M;
  }
  if (f.L < 1) {
    w.push_back("L=" + std::to_string(f.L) + " raised to 1");
    f.L = 1;
  }
  return choice;
}

}  // namespace

Choice defaults(Kind kind, std::size_t n, const Options& options) {
  require_observations(n);
  const double half = static_cast<double>(n) / 2.0;
  const int N = static_cast<int>(n / 2);
  switch (kind) {
    case Kind::DefaultVol:
    case Kind::DefaultCov:
    case Kind::DefaultLeverage:
    case Kind::DefaultQuarticity:
      return finish(N, floor_int(std::sqrt(half)), floor_int(std::pow(half, 0.25)), n, options);
    case Kind::DefaultVolVol:
      return finish(N, floor_int(std::pow(half, 0.4)), floor_int(std::pow(half, 0.2)), n, options);
    case Kind::NoisyPreset:
      return noisy_preset(n, options);
    case Kind::MeshPreset:
      throw Error(Errc::InvalidConfig, "the mesh preset needs the observation grids, not only n");
  }
  throw Error(Errc::InvalidConfig, "unknown policy kind");
}

Choice defaults_cov(std::size_t n1, std::size_t n2, const Options& options) {
  return defaults(Kind::DefaultCov, std::min(n1, n2), options);
}

Choice noisy_preset(std::size_t n, const Options& options) {
  require_observations(n);
  const int N = floor_int(5.0 * std::sqrt(static_cast<double>(n)));
  // M and L follow the (possibly clipped) N so the cascade stays consistent.
  const int nyquist = static_cast<int>(n / 2);
  const int N_used = options.clamp ? std::clamp(N, 1, std::max(nyquist, 1)) : N;
  const int M = floor_int(0.3 * std::sqrt(static_cast<double>(N_used)));
  const int M_used = options.clamp ? std::clamp(M, 1, N_used) : M;
  const int L = floor_int(std::sqrt(static_cast<double>(std::max(M_used, 0))));
  return finish(N, M, L, n, options);
}

Choice mesh_preset(double mesh, std::size_t n1, std::size_t n2, const Options& options) {
  const std::size_t n = std::min(n1, n2);
  require_observations(n);
  if (!(mesh > 0.0 && std::isfinite(mesh)))
    throw Error(Errc::TooFewObservations, "mesh must be finite and positive");
  const int N = floor_int(20.0 / std::sqrt(mesh));
  const int nyquist = static_cast<int>(n / 2);
  const int N_used = options.clamp ? std::clamp(N, 1, std::max(nyquist, 1)) : N;
  const double exponent = options.mesh_m_exponent == MeshMExponent::Printed ? -0.5 : 0.5;
  const int M = floor_int(0.3 * std::pow(static_cast<double>(N_used), exponent));
  const int M_used = options.clamp ? std::clamp(M, 1, N_used) : M;
  const int L = floor_int(std::sqrt(static_cast<double>(std::max(M_used, 0))));
  return finish(N, M, L, n, options);
}

Choice mesh_preset(const ObservationSeries& first, const ObservationSeries& second, const Options& options) {
  const double mesh = std::max(first.mesh().max_gap, second.mesh().max_gap);
  return mesh_preset(mesh, first.num_increments(), second.num_increments(), options);
}

Kind parse_kind(std::string_view name) {
  if (name == "vol" || name == "default_vol") return Kind::DefaultVol;
  if (name == "cov" || name == "default_cov") return Kind::DefaultCov;
  if (name == "leverage" || name == "default_leverage") return Kind::DefaultLeverage;
  if (name == "volvol" || name == "default_volvol") return Kind::DefaultVolVol;
  if (name == "quarticity" || name == "default_quarticity") return Kind::DefaultQuarticity;
  if (name == "noisy" || name == "noisy_preset") return Kind::NoisyPreset;
  if (name == "mesh" || name == "mesh_preset") return Kind::MeshPreset;
  throw Error(Errc::InvalidConfig, "unknown frequency policy '" + std::string(name) + "'");
}

std::string_view to_string(Kind kind) noexcept {
  switch (kind) {
    case Kind::DefaultVol: return "default_vol";
    case Kind::DefaultCov: return "default_cov";
    case Kind::DefaultLeverage: return "default_leverage";
    case Kind::DefaultVolVol: return "default_volvol";
    case Kind::DefaultQuarticity: return "default_quarticity";
    case Kind::NoisyPreset: return "noisy_preset";
    case Kind::MeshPreset: return "mesh_preset";
  }
  return "unknown";
}

}  // namespace fmvol::policy
