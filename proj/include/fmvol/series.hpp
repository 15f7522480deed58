#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fmvol {

/// Gap statistics of an observation grid.
struct MeshStats {
  double max_gap = 0.0;
  double min_gap = 0.0;
  double mean_gap = 0.0;
  /// (max_gap - min_gap) / mean_gap below kEquispacedTolerance.
  bool is_equispaced = false;
};

inline constexpr double kEquispacedTolerance = 1e-9;

/// One discretely sampled path on [0, T].
///
/// Instances only come out of `validate`, so every live object satisfies:
/// times strictly increasing inside [0, T], at least two points, finite values.
/// The normalized positions t / T consumed by the Fourier routines are computed
/// once here.
class ObservationSeries {
 public:
  static ObservationSeries validate(std::vector<double> times, std::vector<double> values,
                                    double horizon);

  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }
  /// t_l / T for every observation.
  std::span<const double> positions() const noexcept { return positions_; }
  double horizon() const noexcept { return horizon_; }
  const MeshStats& mesh() const noexcept { return mesh_; }

  std::size_t size() const noexcept { return times_.size(); }
  /// Number of increments n (one less than the number of observations).
  std::size_t num_increments() const noexcept { return times_.size() - 1; }

  /// delta_l = x(t_{l+1}) - x(t_l), l = 0..n-1.
  std::vector<double> increments() const;

  /// Same grid, new values (revalidated).
  ObservationSeries with_values(std::vector<double> values) const;

 private:
  ObservationSeries() = default;

  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> positions_;
  double horizon_ = 0.0;
  MeshStats mesh_;
};

MeshStats compute_mesh_stats(std::span<const double> times);

/// Neumaier-compensated sum; the result is independent of how the terms were produced.
double compensated_sum(std::span<const double> terms) noexcept;

/// Sample standard deviation (n - 1 denominator) of the increments.
double increment_std(const ObservationSeries& series);

/// Additive i.i.d. Gaussian observation noise.
///
/// Exactly one of `std_dev` (absolute) or `multiplier` (a multiple of the
/// sample standard deviation of the increments) is set.
struct NoiseSpec {
  std::optional<double> std_dev;
  std::optional<double> multiplier;
  std::uint64_t seed = 0;

  static NoiseSpec absolute(double std_dev, std::uint64_t seed) { return {std_dev, std::nullopt, seed}; }
  static NoiseSpec relative(double multiplier, std::uint64_t seed) { return {std::nullopt, multiplier, seed}; }

  void validate() const;
};

/// values[i] + eta_i with eta_i ~ N(0, s^2) drawn from NormalStream(seed, stream).
ObservationSeries add_noise(const ObservationSeries& series, const NoiseSpec& noise,
                            std::uint64_t stream = 0);

/// Keeps each interior observation independently with probability `keep`;
/// endpoints are always kept. Produces irregular/asynchronous test inputs.
ObservationSeries random_subsample(const ObservationSeries& series, double keep, std::uint64_t seed);

/// Time reversal t -> T - t with the values read backwards.
ObservationSeries time_reversed(const ObservationSeries& series);

}  // namespace fmvol
