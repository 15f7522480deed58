#include "fmvol/fourier.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "fmvol/error.hpp"
#include "parallel.hpp"

namespace fmvol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// exp(-i 2 pi k u), reducing k*u modulo 1 before the trig call.
inline Complex unit_phase(double k, double u) noexcept {
  const double r = std::fmod(k * u, 1.0);
  return {std::cos(kTwoPi * r), -std::sin(kTwoPi * r)};
}

/// Neumaier accumulator.
struct Accumulator {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

// FFTW planning is not thread safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void check_max_index(int max_index) {
  if (max_index < 0) throw Error(Errc::InvalidFrequencies, "max index must be non-negative");
}

}  // namespace

CoefficientVector::CoefficientVector(double horizon, int max_index, bool hermitian)
    : horizon_(horizon), max_index_(max_index), hermitian_(hermitian) {
  check_max_index(max_index);
  if (!(horizon > 0.0 && std::isfinite(horizon)))
    throw Error(Errc::HorizonViolation, "coefficient horizon must be finite and positive");
  data_.assign(hermitian ? static_cast<std::size_t>(max_index) + 1 : 2 * static_cast<std::size_t>(max_index) + 1,
               Complex{});
}

CoefficientVector CoefficientVector::from_full(double horizon, std::vector<Complex> coeffs) {
  if (coeffs.size() % 2 != 1) throw Error(Errc::InvalidSpec, "full coefficient vector must have odd length");
  CoefficientVector c(horizon, static_cast<int>(coeffs.size() / 2), false);
  c.data_ = std::move(coeffs);
  return c;
}

CoefficientVector CoefficientVector::from_nonnegative(double horizon, std::vector<Complex> coeffs) {
  if (coeffs.empty()) throw Error(Errc::InvalidSpec, "hermitian coefficient vector needs c_0");
  CoefficientVector c(horizon, static_cast<int>(coeffs.size()) - 1, true);
  c.data_ = std::move(coeffs);
  c.data_[0] = c.data_[0].real();
  return c;
}

Complex CoefficientVector::at(int k) const {
  if (k < -max_index_ || k > max_index_)
    throw Error(Errc::InsufficientCoefficients,
                "coefficient index " + std::to_string(k) + " outside +/-" + std::to_string(max_index_));
  return (*this)[k];
}

void CoefficientVector::set(int k, Complex value) {
  if (k < -max_index_ || k > max_index_)
    throw Error(Errc::InsufficientCoefficients,
                "coefficient index " + std::to_string(k) + " outside +/-" + std::to_string(max_index_));
  if (hermitian_) {
    if (k == 0)
      data_[0] = value.real();
    else if (k > 0)
      data_[static_cast<std::size_t>(k)] = value;
    else
      data_[static_cast<std::size_t>(-k)] = std::conj(value);
    return;
  }
  data_[static_cast<std::size_t>(k + max_index_)] = value;
}

std::vector<Complex> CoefficientVector::materialize() const {
  std::vector<Complex> out(2 * static_cast<std::size_t>(max_index_) + 1);
  for (int k = -max_index_; k <= max_index_; ++k) out[static_cast<std::size_t>(k + max_index_)] = (*this)[k];
  return out;
}

CoefficientVector CoefficientVector::truncated(int max_index) const {
  if (max_index > max_index_)
    throw Error(Errc::InsufficientCoefficients, "cannot truncate to a larger max index");
  CoefficientVector out(horizon_, max_index, hermitian_);
  for (int k = hermitian_ ? 0 : -max_index; k <= max_index; ++k) out.set(k, (*this)[k]);
  return out;
}

double CoefficientVector::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : data_) m = std::max(m, std::abs(c));
  return m;
}

bool fft_eligible(const ObservationSeries& series) {
  const auto& mesh = series.mesh();
  if (!mesh.is_equispaced) return false;
  const double ratio = series.horizon() / mesh.mean_gap;
  const double period = std::round(ratio);
  return std::fabs(ratio - period) <= kEquispacedTolerance * period &&
         period >= static_cast<double>(series.num_increments());
}

CoefficientVector increment_coeffs_direct(const ObservationSeries& series, int max_index,
                                          const IncrementOptions& options) {
  check_max_index(max_index);
  const double T = series.horizon();
  const auto delta = series.increments();
  const auto u = series.positions();
  const std::size_t n = delta.size();

  std::vector<Complex> step;
  if (options.phases == PhaseEvaluation::Recurrence) {
    step.resize(n);
    for (std::size_t l = 0; l < n; ++l) step[l] = unit_phase(1.0, u[l]);
  }

  std::vector<Complex> out(static_cast<std::size_t>(max_index) + 1);
  const std::size_t blocks = static_cast<std::size_t>(max_index) / kPhaseBlock + 1;

  detail::parallel_for(blocks, options.threads, [&](std::size_t b) {
    const int k0 = static_cast<int>(b) * kPhaseBlock;
    const int len = std::min(kPhaseBlock, max_index - k0 + 1);
    std::array<Accumulator, kPhaseBlock> re{}, im{};
    for (std::size_t l = 0; l < n; ++l) {
      const double d = delta[l];
      if (options.phases == PhaseEvaluation::Exact) {
        for (int j = 0; j < len; ++j) {
          const Complex z = unit_phase(static_cast<double>(k0 + j), u[l]);
          re[j].add(z.real() * d);
          im[j].add(z.imag() * d);
        }
        continue;
      }
      const Complex z0 = unit_phase(static_cast<double>(k0), u[l]);
      double zr = z0.real(), zi = z0.imag();
      const double wr = step[l].real(), wi = step[l].imag();
      for (int j = 0; j < len; ++j) {
        re[j].add(zr * d);
        im[j].add(zi * d);
        const double nr = zr * wr - zi * wi;
        zi = zr * wi + zi * wr;
        zr = nr;
      }
    }
    for (int j = 0; j < len; ++j)
      out[static_cast<std::size_t>(k0 + j)] = Complex(re[j].value(), im[j].value()) / T;
  });
  return CoefficientVector::from_nonnegative(T, std::move(out));
}

CoefficientVector increment_coeffs_fft(const ObservationSeries& series, int max_index) {
  check_max_index(max_index);
  if (!fft_eligible(series))
    throw Error(Errc::InvalidSpec, "grid is not equispaced with a spacing that divides the horizon");
  const double T = series.horizon();
  const auto period = static_cast<std::size_t>(std::llround(T / series.mesh().mean_gap));
  const auto delta = series.increments();
  const std::size_t half = period / 2 + 1;

  double* in = fftw_alloc_real(period);
  fftw_complex* spec = fftw_alloc_complex(half);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(period), in, spec, FFTW_ESTIMATE);
  }
  std::fill(in, in + period, 0.0);
  std::copy(delta.begin(), delta.end(), in);
  fftw_execute(plan);

  // t_l = t_0 + l T / P, so c_k = exp(-i 2 pi k t_0 / T) X_{k mod P} / T.
  const double u0 = series.positions()[0];
  std::vector<Complex> out(static_cast<std::size_t>(max_index) + 1);
  for (int k = 0; k <= max_index; ++k) {
    const std::size_t m = static_cast<std::size_t>(k) % period;
    Complex x = m < half ? Complex(spec[m][0], spec[m][1])
                         : std::conj(Complex(spec[period - m][0], spec[period - m][1]));
    if (u0 != 0.0) x *= unit_phase(static_cast<double>(k), u0);
    out[static_cast<std::size_t>(k)] = x / T;
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(spec);
  return CoefficientVector::from_nonnegative(T, std::move(out));
}

CoefficientVector increment_coeffs(const ObservationSeries& series, int max_index,
                                   const IncrementOptions& options, std::vector<std::string>* warnings) {
  check_max_index(max_index);
  if (warnings && 2 * static_cast<std::size_t>(max_index) > series.num_increments())
    warnings->push_back("KTooLarge: increment coefficients requested up to |k|=" + std::to_string(max_index) +
                        " above n/2 with n=" + std::to_string(series.num_increments()) +
                        "; frequencies beyond n/2 alias on equispaced grids");
  if (options.allow_fft && fft_eligible(series)) return increment_coeffs_fft(series, max_index);
  return increment_coeffs_direct(series, max_index, options);
}

Complex function_coeff_from_increment(Complex increment_coeff, int k, double boundary_jump, double horizon) {
  if (k == 0)
    throw Error(Errc::ZeroFrequencyRequested,
                "the mean coefficient of f is not recoverable from the coefficients of df");
  const Complex factor(0.0, static_cast<double>(k) * kTwoPi / horizon);
  return (increment_coeff - boundary_jump / horizon) / factor;
}

CoefficientVector function_coeffs_from_increments(const CoefficientVector& increments, double boundary_jump,
                                                  Complex mean_coeff) {
  const int K = increments.max_index();
  const double T = increments.horizon();
  CoefficientVector out(T, K, increments.hermitian());
  out.set(0, mean_coeff);
  for (int k = increments.hermitian() ? 1 : -K; k <= K; ++k) {
    if (k == 0) continue;
    out.set(k, function_coeff_from_increment(increments[k], k, boundary_jump, T));
  }
  return out;
}

CoefficientVector differentiate_coeffs(const CoefficientVector& coeffs, std::optional<double> boundary_jump) {
  const int K = coeffs.max_index();
  const double T = coeffs.horizon();
  const double shift = boundary_jump ? *boundary_jump / T : 0.0;
  CoefficientVector out(T, K, coeffs.hermitian());
  for (int k = coeffs.hermitian() ? 0 : -K; k <= K; ++k) {
    const Complex factor(0.0, static_cast<double>(k) * kTwoPi / T);
    out.set(k, factor * coeffs[k] + shift);
  }
  return out;
}

SpotPath fejer_invert(const CoefficientVector& coeffs, int cutoff, std::span<const double> taus) {
  if (cutoff < 1) throw Error(Errc::InvalidFrequencies, "Fejer cutoff must be at least 1");
  if (cutoff > coeffs.max_index())
    throw Error(Errc::CutoffExceedsCoefficients,
                "cutoff " + std::to_string(cutoff) + " exceeds available max index " +
                    std::to_string(coeffs.max_index()));
  const double T = coeffs.horizon();
  SpotPath path;
  path.taus.assign(taus.begin(), taus.end());
  path.values.resize(taus.size());

  std::vector<double> weight(static_cast<std::size_t>(cutoff) + 1);
  for (int k = 0; k <= cutoff; ++k) weight[static_cast<std::size_t>(k)] = 1.0 - static_cast<double>(k) / cutoff;

  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double tau = taus[i];
    if (!(tau >= 0.0 && tau <= T))
      throw Error(Errc::HorizonViolation, "estimation time " + std::to_string(tau) + " outside [0, T]");
    const double u = tau / T;
    Complex acc{};
    for (int k = -cutoff; k <= cutoff; ++k) {
      // unit_phase gives exp(-i ...); the inversion needs exp(+i ...)
      const Complex e = std::conj(unit_phase(static_cast<double>(k), u));
      acc += weight[static_cast<std::size_t>(std::abs(k))] * coeffs[k] * e;
    }
    path.values[i] = acc.real();
    path.max_imag_residual = std::max(path.max_imag_residual, std::fabs(acc.imag()));
  }
  return path;
}

std::vector<double> default_taus(double horizon, int cutoff) {
  if (cutoff < 1) throw Error(Errc::InvalidFrequencies, "cutoff must be at least 1");
  const int count = 2 * cutoff + 1;
  std::vector<double> taus(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) taus[static_cast<std::size_t>(i)] = horizon * i / (2.0 * cutoff);
  taus.back() = horizon;
  return taus;
}

}  // namespace fmvol
