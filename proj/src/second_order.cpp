#include "fmvol/second_order.hpp"

#include <cmath>
#include <numbers>

#include "fmvol/error.hpp"
#include "fmvol/policies.hpp"

namespace fmvol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_coverage(const CoefficientVector& c, int needed, const char* what) {
  if (c.max_index() < needed)
    throw Error(Errc::InsufficientCoefficients, std::string(what) + " needs coefficients up to |k|=" +
                                                    std::to_string(needed) + ", have " +
                                                    std::to_string(c.max_index()));
}

void require_cutoffs(int M, int K) {
  if (M < 1) throw Error(Errc::InvalidFrequencies, "M must be at least 1");
  if (K < 0) throw Error(Errc::InvalidFrequencies, "output max index must be non-negative");
}

/// Generic truncated Bohr convolution sum_{|j|<=M} a_j b_{k-j} scaled by `scale`.
CoefficientVector truncated_product(const CoefficientVector& a, const CoefficientVector& b, int M, int K,
                                    double scale) {
  const bool hermitian = a.hermitian() && b.hermitian();
  CoefficientVector out(a.horizon(), K, hermitian);
  for (int k = hermitian ? 0 : -K; k <= K; ++k) {
    Complex acc{};
    for (int j = -M; j <= M; ++j) acc += a[j] * b[k - j];
    out.set(k, scale * acc);
  }
  return out;
}

Estimate finish(Complex value) { return {value.real(), std::fabs(value.imag()), {}}; }

CuttingFrequencies resolve(std::optional<CuttingFrequencies> freqs, SecondOrderKind kind, std::size_t n,
                           std::vector<std::string>& warnings) {
  if (freqs) {
    freqs->validate();
    return *freqs;
  }
  const auto policy_kind = kind == SecondOrderKind::VolVol ? policy::Kind::DefaultVolVol
                           : kind == SecondOrderKind::Leverage ? policy::Kind::DefaultLeverage
                                                               : policy::Kind::DefaultQuarticity;
  auto choice = policy::defaults(policy_kind, n);
  warnings = std::move(choice.warnings);
  return choice.freqs;
}

struct Inputs {
  CoefficientVector dx;
  VolCoefficients variance;
};

Inputs compute_inputs(const ObservationSeries& series, SecondOrderKind kind, const CuttingFrequencies& freqs,
                      int out_max_index) {
  const auto plan = plan_coefficients(kind, freqs, out_max_index);
  auto dx = increment_coeffs(series, plan.increments);
  auto variance = vol_coefficients(dx, dx, freqs.N, plan.variance);
  return {std::move(dx), std::move(variance)};
}

SecondOrderCoefficients coefficients_for(SecondOrderKind kind, const Inputs& in, int M, int K) {
  switch (kind) {
    case SecondOrderKind::Leverage: return leverage_coeffs(in.dx, in.variance, M, K);
    case SecondOrderKind::VolVol: return volvol_coeffs(in.variance, M, K);
    case SecondOrderKind::Quarticity: return quarticity_coeffs(in.variance, M, K);
  }
  throw Error(Errc::InvalidConfig, "unknown second-order kind");
}

SpotPath spot_pipeline(SecondOrderKind kind, const ObservationSeries& series, std::optional<CuttingFrequencies> freqs,
                       std::optional<std::vector<double>> taus) {
  std::vector<std::string> warnings;
  const auto f = resolve(freqs, kind, series.num_increments(), warnings);
  const auto inputs = compute_inputs(series, kind, f, f.L);
  const auto coeffs = coefficients_for(kind, inputs, f.M, f.L);
  const auto nodes = taus ? std::move(*taus) : default_taus(series.horizon(), f.L);
  auto path = fejer_invert(coeffs.coeffs, f.L, nodes);
  path.warnings = std::move(warnings);
  return path;
}

}  // namespace

std::string_view to_string(SecondOrderKind kind) noexcept {
  switch (kind) {
    case SecondOrderKind::Leverage: return "leverage";
    case SecondOrderKind::VolVol: return "volvol";
    case SecondOrderKind::Quarticity: return "quarticity";
  }
  return "unknown";
}

CoefficientPlan plan_coefficients([[maybe_unused]] SecondOrderKind kind, const CuttingFrequencies& freqs, int out_max_index) {
  require_cutoffs(freqs.M, out_max_index);
  if (freqs.N < 1) throw Error(Errc::InvalidFrequencies, "N must be at least 1");
  CoefficientPlan plan;
  plan.variance = freqs.M + out_max_index;
  // c(sigma^2) up to M+K needs c(dx) up to N+M+K, which also covers the |j| <= M
  // increment coefficients the leverage reads directly.
  plan.increments = freqs.N + plan.variance;
  return plan;
}

SecondOrderCoefficients leverage_coeffs(const CoefficientVector& dx, const VolCoefficients& variance, int M,
                                        int out_max_index) {
  require_cutoffs(M, out_max_index);
  require_coverage(dx, M, "leverage");
  require_coverage(variance.coeffs, M + out_max_index, "leverage");
  if (dx.horizon() != variance.coeffs.horizon())
    throw Error(Errc::HorizonMismatch, "leverage inputs live on different horizons");
  const double T = dx.horizon();
  const auto dvar = differentiate_coeffs(variance.coeffs);
  return {SecondOrderKind::Leverage, truncated_product(dx, dvar, M, out_max_index, T / (2.0 * M + 1.0)),
          variance.N, M};
}

SecondOrderCoefficients volvol_coeffs(const VolCoefficients& variance, int M, int out_max_index) {
  require_cutoffs(M, out_max_index);
  require_coverage(variance.coeffs, M + out_max_index, "volvol");
  const double T = variance.coeffs.horizon();
  const auto dvar = differentiate_coeffs(variance.coeffs);
  return {SecondOrderKind::VolVol, truncated_product(dvar, dvar, M, out_max_index, T / (2.0 * M + 1.0)),
          variance.N, M};
}

SecondOrderCoefficients quarticity_coeffs(const VolCoefficients& variance, int M, int out_max_index) {
  require_cutoffs(M, out_max_index);
  require_coverage(variance.coeffs, M + out_max_index, "quarticity");
  return {SecondOrderKind::Quarticity, truncated_product(variance.coeffs, variance.coeffs, M, out_max_index, 1.0),
          variance.N, M};
}

Estimate integrated_leverage(const CoefficientVector& dx, const VolCoefficients& variance, int M, LeverageNorm norm,
                             LeverageSign sign) {
  require_cutoffs(M, 0);
  require_coverage(dx, M, "integrated leverage");
  require_coverage(variance.coeffs, M, "integrated leverage");
  const double T = dx.horizon();
  const double orientation = sign == LeverageSign::Consistent ? -1.0 : 1.0;
  Complex acc{};
  for (int j = -M; j <= M; ++j) {
    const double fejer = 1.0 - static_cast<double>(std::abs(j)) / M;
    acc += Complex(0.0, orientation * j * kTwoPi / T) * fejer * dx[j] * variance.coeffs[-j];
  }
  const double denom = norm == LeverageNorm::Paper ? M + 1.0 : 2.0 * M + 1.0;
  return finish((T * T / denom) * acc);
}

Estimate integrated_volvol(const VolCoefficients& variance, int M) {
  require_cutoffs(M, 0);
  require_coverage(variance.coeffs, M, "integrated volvol");
  const double T = variance.coeffs.horizon();
  const double w = kTwoPi / T;
  Complex acc{};
  for (int j = -M; j <= M; ++j) {
    const double fejer = 1.0 - static_cast<double>(std::abs(j)) / M;
    acc += (static_cast<double>(j) * j * w * w * fejer) * (variance.coeffs[j] * variance.coeffs[-j]);
  }
  return finish((T * T / (2.0 * M + 1.0)) * acc);
}

Estimate integrated_quarticity(const VolCoefficients& variance, int M) {
  require_cutoffs(M, 0);
  require_coverage(variance.coeffs, M, "integrated quarticity");
  const double T = variance.coeffs.horizon();
  Complex acc{};
  for (int s = -M; s <= M; ++s) acc += variance.coeffs[s] * variance.coeffs[-s];
  return finish(T * acc);
}

SecondOrderCoefficients leverage_coeffs(const ObservationSeries& series, const CuttingFrequencies& freqs,
                                        int out_max_index) {
  return coefficients_for(SecondOrderKind::Leverage,
                          compute_inputs(series, SecondOrderKind::Leverage, freqs, out_max_index), freqs.M,
                          out_max_index);
}

SecondOrderCoefficients volvol_coeffs(const ObservationSeries& series, const CuttingFrequencies& freqs,
                                      int out_max_index) {
  return coefficients_for(SecondOrderKind::VolVol,
                          compute_inputs(series, SecondOrderKind::VolVol, freqs, out_max_index), freqs.M,
                          out_max_index);
}

SecondOrderCoefficients quarticity_coeffs(const ObservationSeries& series, const CuttingFrequencies& freqs,
                                          int out_max_index) {
  return coefficients_for(SecondOrderKind::Quarticity,
                          compute_inputs(series, SecondOrderKind::Quarticity, freqs, out_max_index), freqs.M,
                          out_max_index);
}

SpotPath spot_leverage(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs,
                       std::optional<std::vector<double>> taus) {
  return spot_pipeline(SecondOrderKind::Leverage, series, freqs, std::move(taus));
}

SpotPath spot_volvol(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs,
                     std::optional<std::vector<double>> taus) {
  return spot_pipeline(SecondOrderKind::VolVol, series, freqs, std::move(taus));
}

SpotPath spot_quarticity(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs,
                         std::optional<std::vector<double>> taus) {
  return spot_pipeline(SecondOrderKind::Quarticity, series, freqs, std::move(taus));
}

Estimate integrated_leverage(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs,
                             LeverageNorm norm, LeverageSign sign) {
  std::vector<std::string> warnings;
  const auto f = resolve(freqs, SecondOrderKind::Leverage, series.num_increments(), warnings);
  const auto in = compute_inputs(series, SecondOrderKind::Leverage, f, 0);
  auto est = integrated_leverage(in.dx, in.variance, f.M, norm, sign);
  est.warnings = std::move(warnings);
  return est;
}

Estimate integrated_volvol(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs) {
  std::vector<std::string> warnings;
  const auto f = resolve(freqs, SecondOrderKind::VolVol, series.num_increments(), warnings);
  const auto in = compute_inputs(series, SecondOrderKind::VolVol, f, 0);
  auto est = integrated_volvol(in.variance, f.M);
  est.warnings = std::move(warnings);
  return est;
}

Estimate integrated_quarticity(const ObservationSeries& series, std::optional<CuttingFrequencies> freqs) {
  std::vector<std::string> warnings;
  const auto f = resolve(freqs, SecondOrderKind::Quarticity, series.num_increments(), warnings);
  const auto in = compute_inputs(series, SecondOrderKind::Quarticity, f, 0);
  auto est = integrated_quarticity(in.variance, f.M);
  est.warnings = std::move(warnings);
  return est;
}

}  // namespace fmvol
