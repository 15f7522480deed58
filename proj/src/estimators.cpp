#include "fmvol/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "fmvol/error.hpp"
#include "fmvol/policies.hpp"

namespace fmvol {

namespace {

void require_coverage(const CoefficientVector& c, int needed, const char* what) {
  if (c.max_index() < needed)
    throw Error(Errc::InsufficientCoefficients, std::string(what) + " needs coefficients up to |k|=" +
                                                    std::to_string(needed) + ", have " +
                                                    std::to_string(c.max_index()));
}

void require_same_horizon(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.horizon() != b.horizon())
    throw Error(Errc::HorizonMismatch, "coefficient vectors live on different horizons");
}

void nyquist_warning(std::vector<std::string>& warnings, int N, std::size_t n) {
  if (2 * static_cast<std::size_t>(N) > n + 1)
    warnings.push_back("convolution truncation N=" + std::to_string(N) + " exceeds n/2 for n=" +
                       std::to_string(n) + "; aliased frequencies enter the estimate");
}

}  // namespace

void check_same_horizon(const ObservationSeries& first, const ObservationSeries& second) {
  if (first.horizon() != second.horizon())
    throw Error(Errc::HorizonMismatch, "series have different horizons (" + std::to_string(first.horizon()) +
                                           " vs " + std::to_string(second.horizon()) + ")");
}

CoefficientVector convolve(const CoefficientVector& ci, const CoefficientVector& cj, int N, int max_index) {
  if (N < 0 || max_index < 0) throw Error(Errc::InvalidFrequencies, "N and K must be non-negative");
  require_same_horizon(ci, cj);
  require_coverage(ci, N + max_index, "convolve");
  require_coverage(cj, N + max_index, "convolve");

  const double T = ci.horizon();
  const double scale = T / (2.0 * N + 1.0);
  const bool hermitian = ci.hermitian() && cj.hermitian();
  const auto a = ci.materialize();
  const auto b = cj.materialize();
  const int ka = ci.max_index();
  const int kb = cj.max_index();

  CoefficientVector out(T, max_index, hermitian);
  for (int k = hermitian ? 0 : -max_index; k <= max_index; ++k) {
    Complex acc{};
    for (int s = -N; s <= N; ++s)
      acc += a[static_cast<std::size_t>(s + ka)] * b[static_cast<std::size_t>(k - s + kb)];
    out.set(k, scale * acc);
  }
  return out;
}

VolCoefficients vol_coefficients(const CoefficientVector& dxi, const CoefficientVector& dxj, int N, int max_index) {
  if (&dxi == &dxj) return {convolve(dxi, dxi, N, max_index), N};
  auto forward = convolve(dxi, dxj, N, max_index);
  const auto backward = convolve(dxj, dxi, N, max_index);
  for (int k = forward.hermitian() ? 0 : -max_index; k <= max_index; ++k)
    forward.set(k, 0.5 * (forward[k] + backward[k]));
  return {std::move(forward), N};
}

SpotPath spot_cov_from_coeffs(const CoefficientVector& dxi, const CoefficientVector& dxj,
                              const CuttingFrequencies& freqs, std::optional<std::vector<double>> taus) {
  if (freqs.N < 1 || freqs.M < 1) throw Error(Errc::InvalidFrequencies, "N and M must be at least 1");
  const auto vol = vol_coefficients(dxi, dxj, freqs.N, freqs.M);
  const auto nodes = taus ? std::move(*taus) : default_taus(dxi.horizon(), freqs.M);
  return fejer_invert(vol.coeffs, freqs.M, nodes);
}

SpotPath spot_vol(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs,
                  std::optional<std::vector<double>> taus) {
  std::vector<std::string> warnings;
  if (!freqs) {
    auto choice = policy::defaults(policy::Kind::DefaultVol, series.num_increments());
    freqs = choice.freqs;
    warnings = std::move(choice.warnings);
  }
  freqs->validate();
  nyquist_warning(warnings, freqs->N, series.num_increments());
  const auto dx = increment_coeffs(series, freqs->N + freqs->M);
  auto path = spot_cov_from_coeffs(dx, dx, *freqs, std::move(taus));
  path.warnings.insert(path.warnings.begin(), warnings.begin(), warnings.end());
  return path;
}

SpotPath spot_cov(const ObservationSeries& first, const ObservationSeries& second,
                  std::optional<CuttingFrequencies> freqs, std::optional<std::vector<double>> taus) {
  check_same_horizon(first, second);
  std::vector<std::string> warnings;
  if (!freqs) {
    auto choice = policy::defaults_cov(first.num_increments(), second.num_increments());
    freqs = choice.freqs;
    warnings = std::move(choice.warnings);
  }
  freqs->validate();
  nyquist_warning(warnings, freqs->N, std::min(first.num_increments(), second.num_increments()));
  const int K = freqs->N + freqs->M;
  const auto dx1 = increment_coeffs(first, K);
  const auto dx2 = increment_coeffs(second, K);
  auto path = spot_cov_from_coeffs(dx1, dx2, *freqs, std::move(taus));
  path.warnings.insert(path.warnings.begin(), warnings.begin(), warnings.end());
  return path;
}

Estimate integrated_cov_from_coeffs(const CoefficientVector& dxi, const CoefficientVector& dxj, int N) {
  if (N < 0) throw Error(Errc::InvalidFrequencies, "N must be non-negative");
  require_same_horizon(dxi, dxj);
  require_coverage(dxi, N, "integrated covariance");
  require_coverage(dxj, N, "integrated covariance");
  const double T = dxi.horizon();
  Complex acc{};
  for (int s = -N; s <= N; ++s) acc += dxi[s] * dxj[-s];
  const Complex value = (T * T / (2.0 * N + 1.0)) * acc;
  return {value.real(), std::fabs(value.imag()), {}};
}

Estimate integrated_vol(const ObservationSeries& series, std::optional<int> N) {
  const int n_used = N ? *N : static_cast<int>(series.num_increments() / 2);
  if (n_used < 1) throw Error(Errc::InvalidFrequencies, "N must be at least 1");
  const auto dx = increment_coeffs(series, n_used);
  auto est = integrated_cov_from_coeffs(dx, dx, n_used);
  nyquist_warning(est.warnings, n_used, series.num_increments());
  return est;
}

Estimate integrated_cov(const ObservationSeries& first, const ObservationSeries& second, std::optional<int> N) {
  check_same_horizon(first, second);
  const std::size_t n = std::min(first.num_increments(), second.num_increments());
  const int n_used = N ? *N : static_cast<int>(n / 2);
  if (n_used < 1) throw Error(Errc::InvalidFrequencies, "N must be at least 1");
  const auto dx1 = increment_coeffs(first, n_used);
  const auto dx2 = increment_coeffs(second, n_used);
  auto est = integrated_cov_from_coeffs(dx1, dx2, n_used);
  nyquist_warning(est.warnings, n_used, n);
  return est;
}

std::size_t clip_negative_variance(SpotPath& path) {
  std::size_t clipped = 0;
  for (double& v : path.values) {
    if (v < 0.0) {
      v = 0.0;
      ++clipped;
    }
  }
  return clipped;
}

}  // namespace fmvol
