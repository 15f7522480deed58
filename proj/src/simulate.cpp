#include "fmvol/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmvol/error.hpp"
#include "fmvol/random.hpp"

namespace fmvol::sim {

namespace {

constexpr std::uint64_t kDriverStream = 0x4845'5354'0000'0000ull;  // "HEST"
constexpr double kPsdTolerance = 1e-12;

void require(bool ok, Errc code, const std::string& message) {
  if (!ok) throw Error(code, message);
}

std::vector<std::vector<double>> matrix_for(const HestonSpec& spec) {
  if (spec.dimension() == 1) return {{1.0, spec.rho[0]}, {spec.rho[0], 1.0}};
  return driver_correlation(spec.rho);
}

SimulatedPath run_euler(const HestonSpec& spec) {
  spec.validate();
  const std::size_t d = spec.dimension();
  const std::size_t drivers = 2 * d;
  const auto L = correlation_factor(matrix_for(spec));
  const auto n = static_cast<std::size_t>(spec.steps);
  const double dt = spec.horizon / spec.steps;
  const double sqdt = std::sqrt(dt);

  SimulatedPath path;
  path.horizon = spec.horizon;
  path.times.resize(n + 1);
  for (std::size_t l = 0; l <= n; ++l) path.times[l] = spec.horizon * static_cast<double>(l) / spec.steps;
  path.times.back() = spec.horizon;
  path.x.assign(d, std::vector<double>(n + 1));
  path.v.assign(d, std::vector<double>(n + 1));
  path.truncations.assign(d, 0);

  std::vector<double> x = spec.x0;
  std::vector<double> v = spec.v0;  // raw Euler state, may dip below zero
  for (std::size_t j = 0; j < d; ++j) {
    path.x[j][0] = x[j];
    path.v[j][0] = std::max(v[j], 0.0);
  }

  const NormalStream normals(spec.seed, kDriverStream + d);
  std::vector<double> eps(drivers), z(drivers);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < drivers; ++k) eps[k] = normals(l * drivers + k);
    for (std::size_t r = 0; r < drivers; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c <= r; ++c) acc += L[r][c] * eps[c];
      z[r] = acc;
    }
    for (std::size_t j = 0; j < d; ++j) {
      const auto& p = spec.assets[j];
      const double vp = std::max(v[j], 0.0);
      const double sv = std::sqrt(vp);
      x[j] += (p.mu - 0.5 * vp) * dt + sv * sqdt * z[j];
      v[j] += p.theta * (p.alpha - vp) * dt + p.gamma * sv * sqdt * z[d + j];
      if (v[j] < 0.0) ++path.truncations[j];
      path.x[j][l + 1] = x[j];
      path.v[j][l + 1] = std::max(v[j], 0.0);
    }
  }
  return path;
}

}  // namespace

void HestonSpec::validate() const {
  require(std::isfinite(horizon) && horizon > 0.0, Errc::InvalidSpec, "horizon must be positive");
  require(steps >= 2, Errc::InvalidSpec, "need at least 2 steps");
  require(assets.size() == 1 || assets.size() == 2, Errc::InvalidSpec, "Heston spec supports 1 or 2 assets");
  require(x0.size() == assets.size() && v0.size() == assets.size(), Errc::InvalidSpec,
          "x0 and v0 must have one entry per asset");
  const std::size_t want_rho = assets.size() == 1 ? 1 : 6;
  require(rho.size() == want_rho, Errc::InvalidSpec,
          "rho must have " + std::to_string(want_rho) + " entries for " + std::to_string(assets.size()) + " asset(s)");
  for (const double r : rho)
    require(std::isfinite(r) && std::fabs(r) <= 1.0, Errc::InvalidCorrelation, "correlations must lie in [-1, 1]");
  for (std::size_t j = 0; j < assets.size(); ++j) {
    const auto& p = assets[j];
    require(std::isfinite(p.mu) && std::isfinite(x0[j]), Errc::InvalidSpec, "mu and x0 must be finite");
    require(std::isfinite(p.theta) && p.theta > 0.0, Errc::InvalidSpec, "theta must be positive");
    require(std::isfinite(p.gamma) && p.gamma >= 0.0, Errc::InvalidSpec, "gamma must be non-negative");
    require(std::isfinite(p.alpha) && p.alpha >= 0.0, Errc::InvalidSpec, "alpha must be non-negative");
    require(std::isfinite(v0[j]) && v0[j] > 0.0, Errc::NonPositiveInit, "initial variance must be positive");
  }
}

HestonSpec HestonSpec::reference_bivariate(std::uint64_t seed) {
  HestonSpec spec;
  spec.horizon = 1.0;
  spec.steps = 23400;
  spec.assets = {{0.0, 0.4, 2.0, 1.0}, {0.0, 0.4, 2.0, 1.0}};
  spec.rho = {0.5, -0.5, 0.0, 0.0, -0.5, 0.5};
  spec.x0 = {std::log(100.0), std::log(100.0)};
  spec.v0 = {0.4, 0.4};
  spec.seed = seed;
  return spec;
}

ObservationSeries SimulatedPath::series(std::size_t asset) const {
  return ObservationSeries::validate(times, x.at(asset), horizon);
}

ObservationSeries SimulatedPath::variance_series(std::size_t asset) const {
  return ObservationSeries::validate(times, v.at(asset), horizon);
}

std::vector<std::vector<double>> driver_correlation(const std::vector<double>& rho) {
  require(rho.size() == 6, Errc::InvalidSpec, "driver correlation vector needs 6 entries");
  const double r12 = rho[0], r13 = rho[1], r14 = rho[2], r23 = rho[3], r24 = rho[4], r34 = rho[5];
  return {{1.0, r12, r13, r14}, {r12, 1.0, r23, r24}, {r13, r23, 1.0, r34}, {r14, r24, r34, 1.0}};
}

std::vector<std::vector<double>> correlation_factor(const std::vector<std::vector<double>>& corr) {
  const std::size_t n = corr.size();
  for (std::size_t i = 0; i < n; ++i) {
    require(corr[i].size() == n, Errc::InvalidSpec, "correlation matrix must be square");
    require(corr[i][i] == 1.0, Errc::InvalidCorrelation, "correlation matrix needs a unit diagonal");
    for (std::size_t j = 0; j < i; ++j) {
      require(corr[i][j] == corr[j][i], Errc::InvalidCorrelation, "correlation matrix must be symmetric");
      require(std::fabs(corr[i][j]) <= 1.0, Errc::InvalidCorrelation, "correlations must lie in [-1, 1]");
    }
  }
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = corr[j][j];
    for (std::size_t k = 0; k < j; ++k) pivot -= L[j][k] * L[j][k];
    if (pivot < -kPsdTolerance)
      throw Error(Errc::CorrelationNotPSD, "correlation matrix is not positive semidefinite");
    if (pivot <= kPsdTolerance) {
      // semidefinite direction: the column stays zero, consistency is checked below
      continue;
    }
    L[j][j] = std::sqrt(pivot);
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = corr[i][j];
      for (std::size_t k = 0; k < j; ++k) acc -= L[i][k] * L[j][k];
      L[i][j] = acc / L[j][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += L[i][k] * L[j][k];
      if (std::fabs(acc - corr[i][j]) > 1e-10)
        throw Error(Errc::CorrelationNotPSD, "correlation matrix is not positive semidefinite");
    }
  return L;
}

SimulatedPath heston_1d(const HestonSpec& spec) {
  require(spec.dimension() == 1, Errc::InvalidSpec, "heston_1d needs exactly one asset");
  return run_euler(spec);
}

SimulatedPath heston_2d(const HestonSpec& spec) {
  require(spec.dimension() == 2, Errc::InvalidSpec, "heston_2d needs exactly two assets");
  return run_euler(spec);
}

SimulatedPath simulate(const HestonSpec& spec) {
  return spec.dimension() == 1 ? heston_1d(spec) : heston_2d(spec);
}

double driver_normal(std::uint64_t seed, std::size_t dimension, std::size_t step, std::size_t driver) {
  return NormalStream(seed, kDriverStream + dimension)(step * 2 * dimension + driver);
}

double trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
  double acc = 0.0;
  for (std::size_t l = 0; l + 1 < times.size(); ++l)
    acc += 0.5 * (values[l] + values[l + 1]) * (times[l + 1] - times[l]);
  return acc;
}

TrueIntegrated true_integrated_quantities(const SimulatedPath& path, const HestonSpec& spec) {
  TrueIntegrated out;
  const std::size_t d = path.v.size();
  for (std::size_t j = 0; j < d; ++j) {
    const auto& v = path.v[j];
    std::vector<double> sq(v.size());
    std::transform(v.begin(), v.end(), sq.begin(), [](double a) { return a * a; });
    const double iv = trapezoid(path.times, v);
    const double gamma = spec.assets[j].gamma;
    // price/variance correlation: rho for one asset, rho13 / rho24 for two
    const double rho_xv = d == 1 ? spec.rho[0] : (j == 0 ? spec.rho[1] : spec.rho[4]);
    out.variance.push_back(iv);
    out.quarticity.push_back(trapezoid(path.times, sq));
    out.leverage.push_back(rho_xv * gamma * iv);
    out.volvol.push_back(gamma * gamma * iv);
  }
  if (d == 2) {
    std::vector<double> root(path.times.size());
    for (std::size_t l = 0; l < root.size(); ++l) root[l] = std::sqrt(path.v[0][l] * path.v[1][l]);
    out.covariance = spec.rho[0] * trapezoid(path.times, root);
  }
  return out;
}

}  // namespace fmvol::sim
