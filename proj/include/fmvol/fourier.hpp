#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmvol/series.hpp"

namespace fmvol {

using Complex = std::complex<double>;

/// Fourier coefficients c_k, k = -K..K, of a function or measure on [0, T].
///
/// Hermitian vectors (real-valued sources) store k >= 0 only and return
/// conj(c_{|k|}) for negative k, so c_{-k} == conj(c_k) holds exactly; their c_0
/// is stored as a real number. General vectors store all 2K+1 entries.
class CoefficientVector {
 public:
  CoefficientVector(double horizon, int max_index, bool hermitian);

  /// From entries for k = -K..K (length 2K+1, odd).
  static CoefficientVector from_full(double horizon, std::vector<Complex> coeffs);
  /// From entries for k = 0..K of a hermitian sequence.
  static CoefficientVector from_nonnegative(double horizon, std::vector<Complex> coeffs);

  double horizon() const noexcept { return horizon_; }
  int max_index() const noexcept { return max_index_; }
  bool hermitian() const noexcept { return hermitian_; }

  Complex operator[](int k) const noexcept {
    if (hermitian_) return k >= 0 ? data_[static_cast<std::size_t>(k)] : std::conj(data_[static_cast<std::size_t>(-k)]);
    return data_[static_cast<std::size_t>(k + max_index_)];
  }
  Complex at(int k) const;

  /// For hermitian vectors setting c_k with k < 0 stores conj(value) at -k.
  void set(int k, Complex value);

  /// Entries for k = -K..K.
  std::vector<Complex> materialize() const;
  CoefficientVector truncated(int max_index) const;
  double max_abs() const noexcept;

 private:
  double horizon_;
  int max_index_;
  bool hermitian_;
  std::vector<Complex> data_;
};

/// Reconstructed function of time.
struct SpotPath {
  std::vector<double> taus;
  std::vector<double> values;
  /// Largest |imaginary part| discarded when taking the real part.
  double max_imag_residual = 0.0;
  std::vector<std::string> warnings;
};

/// How the direct nonuniform sum evaluates exp(-i 2 pi k t_l / T).
enum class PhaseEvaluation {
  /// Exact phase at the start of each block of kPhaseBlock frequencies, then a
  /// per-point rotation recurrence; relative phase drift stays below ~kPhaseBlock * 4 eps.
  Recurrence,
  /// sin/cos for every (l, k) pair. Slow; used to validate the recurrence.
  Exact,
};

inline constexpr int kPhaseBlock = 64;

#ifdef FMVOL_EXACT_PHASES
inline constexpr PhaseEvaluation kDefaultPhaseEvaluation = PhaseEvaluation::Exact;
#else
inline constexpr PhaseEvaluation kDefaultPhaseEvaluation = PhaseEvaluation::Recurrence;
#endif

struct IncrementOptions {
  PhaseEvaluation phases = kDefaultPhaseEvaluation;
  /// Use the FFT on equispaced grids whose spacing divides T.
  bool allow_fft = true;
  /// Worker threads for the direct sum; 0 picks hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

/// True when the grid is equispaced and T / spacing is an integer P >= n, which
/// is what the FFT evaluation needs.
bool fft_eligible(const ObservationSeries& series);

/// c_k = (1/T) sum_l exp(-i 2 pi k t_l / T) delta_l for 0 <= k <= K (hermitian).
///
/// Dispatches to the FFT on eligible grids and to the direct sum otherwise.
/// K above n/2 is accepted but reported through `warnings`.
CoefficientVector increment_coeffs(const ObservationSeries& series, int max_index,
                                   const IncrementOptions& options = {},
                                   std::vector<std::string>* warnings = nullptr);

/// Direct O(nK) evaluation, ascending l with compensated accumulation.
CoefficientVector increment_coeffs_direct(const ObservationSeries& series, int max_index,
                                          const IncrementOptions& options = {});

/// FFT evaluation; throws InvalidSpec when the grid is not fft_eligible.
CoefficientVector increment_coeffs_fft(const ObservationSeries& series, int max_index);

/// F(f)(k) = (F(df)(k) - (f(T) - f(0))/T) / (i k 2 pi / T); k == 0 throws ZeroFrequencyRequested.
Complex function_coeff_from_increment(Complex increment_coeff, int k, double boundary_jump, double horizon);

/// Applies function_coeff_from_increment for every k != 0. c_0 of f is not
/// determined by dX and is set to `mean_coeff`.
CoefficientVector function_coeffs_from_increments(const CoefficientVector& increments,
                                                  double boundary_jump, Complex mean_coeff = {});

/// c'_j = i j (2 pi / T) c_j, the coefficients of df. When `boundary_jump` is
/// given, (f(T) - f(0))/T is added to every entry; otherwise the boundary term
/// is dropped and c'_0 = 0.
CoefficientVector differentiate_coeffs(const CoefficientVector& coeffs,
                                       std::optional<double> boundary_jump = std::nullopt);

/// Fejer sum sum_{|k|<=M} (1 - |k|/M) c_k exp(i 2 pi k tau / T) at each tau.
SpotPath fejer_invert(const CoefficientVector& coeffs, int cutoff, std::span<const double> taus);

/// 0 : T/(2 cutoff) : T, i.e. 2 cutoff + 1 equally spaced nodes.
std::vector<double> default_taus(double horizon, int cutoff);

}  // namespace fmvol
