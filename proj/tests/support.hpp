#pragma once

// Shared test helpers: random instance generators and a naive reference
// implementation of every estimator, written without touching the library's
// coefficient machinery.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "fmvol/series.hpp"

namespace fmvol::testing {

using LComplex = std::complex<long double>;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// n + 1 times on [0, T]: equispaced 0..T, or sorted uniforms with 0 and T pinned.
  std::vector<double> grid(std::size_t n, double T, bool irregular) {
    std::vector<double> t(n + 1);
    if (!irregular) {
      for (std::size_t l = 0; l <= n; ++l) t[l] = T * static_cast<double>(l) / static_cast<double>(n);
      t.back() = T;
      return t;
    }
    for (;;) {
      for (auto& x : t) x = uniform(0.0, T);
      t.front() = 0.0;
      t.back() = T;
      std::sort(t.begin(), t.end());
      if (std::adjacent_find(t.begin(), t.end()) == t.end()) return t;
    }
  }

  /// Random walk with a smoothly varying volatility.
  std::vector<double> walk(const std::vector<double>& t, double scale = 0.2) {
    std::vector<double> x(t.size());
    x[0] = uniform(-1.0, 1.0);
    const double phase = uniform(0.0, 6.28);
    for (std::size_t l = 1; l < t.size(); ++l) {
      const double vol = scale * (1.0 + 0.5 * std::sin(phase + 3.0 * t[l]));
      x[l] = x[l - 1] + vol * std::sqrt(t[l] - t[l - 1]) * normal();
    }
    return x;
  }

  ObservationSeries series(std::size_t n, double T, bool irregular) {
    auto t = grid(n, T, irregular);
    auto x = walk(t);
    return ObservationSeries::validate(std::move(t), std::move(x), T);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b, double floor = 1e-300) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
}

inline double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::fabs(x));
  return m;
}

/// Largest |a_i - b_i| divided by the larger sup norm of the two vectors.
inline double path_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  const double scale = std::max({sup_norm(a), sup_norm(b), 1e-300});
  return d / scale;
}

// ---------------------------------------------------------------------------
// Naive oracle. Everything is recomputed from raw observations in long double
// with explicit cos/sin, straight from the defining sums.

namespace oracle {

constexpr long double kPi = std::numbers::pi_v<long double>;

/// c_k(dx) = (1/T) sum_l exp(-i 2 pi k t_l / T) (x_{l+1} - x_l), any sign of k.
inline LComplex dx_coeff(const ObservationSeries& s, int k) {
  const auto t = s.times();
  const auto x = s.values();
  const long double T = s.horizon();
  LComplex acc = 0;
  for (std::size_t l = 0; l + 1 < t.size(); ++l) {
    const long double arg = -2 * kPi * k * static_cast<long double>(t[l]) / T;
    const long double d = static_cast<long double>(x[l + 1]) - x[l];
    acc += LComplex(std::cos(arg) * d, std::sin(arg) * d);
  }
  return acc / T;
}

/// T/(2N+1) sum_{|s|<=N} c_s(dx) c_{k-s}(dy), averaged over both orderings.
inline LComplex var_coeff(const ObservationSeries& x, const ObservationSeries& y, int N, int k) {
  const long double T = x.horizon();
  LComplex fwd = 0, bwd = 0;
  for (int s = -N; s <= N; ++s) {
    fwd += dx_coeff(x, s) * dx_coeff(y, k - s);
    bwd += dx_coeff(y, s) * dx_coeff(x, k - s);
  }
  return T / (2.0L * N + 1) * (fwd + bwd) / 2.0L;
}

inline double fejer_at(const std::vector<LComplex>& c, int K, int cutoff, double T, double tau) {
  LComplex acc = 0;
  for (int k = -cutoff; k <= cutoff; ++k) {
    const long double w = 1.0L - static_cast<long double>(std::abs(k)) / cutoff;
    const long double arg = 2 * kPi * k * static_cast<long double>(tau) / T;
    acc += w * c[static_cast<std::size_t>(k + K)] * LComplex(std::cos(arg), std::sin(arg));
  }
  return static_cast<double>(acc.real());
}

inline std::vector<double> spot_cov(const ObservationSeries& x, const ObservationSeries& y, int N, int M,
                                    const std::vector<double>& taus) {
  std::vector<LComplex> c;
  for (int k = -M; k <= M; ++k) c.push_back(var_coeff(x, y, N, k));
  std::vector<double> out;
  for (const double tau : taus) out.push_back(fejer_at(c, M, M, x.horizon(), tau));
  return out;
}

inline double integrated_cov(const ObservationSeries& x, const ObservationSeries& y, int N) {
  const long double T = x.horizon();
  LComplex acc = 0;
  for (int s = -N; s <= N; ++s) acc += dx_coeff(x, s) * dx_coeff(y, -s);
  return static_cast<double>((T * T / (2.0L * N + 1) * acc).real());
}

enum class Second { Leverage, VolVol, Quarticity };

/// Coefficient k of the second-order target, straight from the double/triple sums.
inline LComplex second_coeff(const ObservationSeries& x, Second kind, int N, int M, int k) {
  const long double T = x.horizon();
  const long double w = 2 * kPi / T;
  auto v = [&](int j) { return var_coeff(x, x, N, j); };
  auto dv = [&](int j) { return LComplex(0, j * w) * v(j); };
  LComplex acc = 0;
  for (int j = -M; j <= M; ++j) {
    switch (kind) {
      case Second::Leverage: acc += dx_coeff(x, j) * dv(k - j); break;
      case Second::VolVol: acc += dv(j) * dv(k - j); break;
      case Second::Quarticity: acc += v(j) * v(k - j); break;
    }
  }
  return kind == Second::Quarticity ? acc : T / (2.0L * M + 1) * acc;
}

inline std::vector<double> spot_second(const ObservationSeries& x, Second kind, int N, int M, int L,
                                       const std::vector<double>& taus) {
  std::vector<LComplex> c;
  for (int k = -L; k <= L; ++k) c.push_back(second_coeff(x, kind, N, M, k));
  std::vector<double> out;
  for (const double tau : taus) out.push_back(fejer_at(c, L, L, x.horizon(), tau));
  return out;
}

inline double integrated_second(const ObservationSeries& x, Second kind, int N, int M, bool symmetric_norm = false,
                                bool printed_sign = false) {
  const long double T = x.horizon();
  const long double w = 2 * kPi / T;
  LComplex acc = 0;
  for (int j = -M; j <= M; ++j) {
    const long double fejer = 1.0L - static_cast<long double>(std::abs(j)) / M;
    switch (kind) {
      case Second::Leverage:
        acc += LComplex(0, (printed_sign ? 1.0L : -1.0L) * j * w) * fejer * dx_coeff(x, j) * var_coeff(x, x, N, -j);
        break;
      case Second::VolVol:
        acc += static_cast<long double>(j) * j * w * w * fejer * var_coeff(x, x, N, j) * var_coeff(x, x, N, -j);
        break;
      case Second::Quarticity: acc += var_coeff(x, x, N, j) * var_coeff(x, x, N, -j); break;
    }
  }
  switch (kind) {
    case Second::Leverage: return static_cast<double>((T * T / (symmetric_norm ? 2.0L * M + 1 : M + 1.0L) * acc).real());
    case Second::VolVol: return static_cast<double>((T * T / (2.0L * M + 1) * acc).real());
    case Second::Quarticity: return static_cast<double>((T * acc).real());
  }
  return 0.0;
}

}  // namespace oracle

}  // namespace fmvol::testing
