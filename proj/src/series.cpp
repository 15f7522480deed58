#include "fmvol/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmvol/error.hpp"
#include "fmvol/random.hpp"

namespace fmvol {

MeshStats compute_mesh_stats(std::span<const double> times) {
  MeshStats stats;
  if (times.size() < 2) return stats;
  stats.max_gap = 0.0;
  stats.min_gap = times[1] - times[0];
  std::vector<double> gaps(times.size() - 1);
  for (std::size_t l = 0; l + 1 < times.size(); ++l) {
    const double gap = times[l + 1] - times[l];
    gaps[l] = gap;
    stats.max_gap = std::max(stats.max_gap, gap);
    stats.min_gap = std::min(stats.min_gap, gap);
  }
  stats.mean_gap = compensated_sum(gaps) / static_cast<double>(gaps.size());
  stats.is_equispaced = (stats.max_gap - stats.min_gap) / stats.mean_gap < kEquispacedTolerance;
  return stats;
}

double compensated_sum(std::span<const double> terms) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (const double x : terms) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

ObservationSeries ObservationSeries::validate(std::vector<double> times, std::vector<double> values,
                                              double horizon) {
  if (!(std::isfinite(horizon) && horizon > 0.0))
    throw Error(Errc::HorizonViolation, "horizon must be finite and positive");
  if (times.size() != values.size())
    throw Error(Errc::TooFewPoints, "times and values differ in length (" +
                                        std::to_string(times.size()) + " vs " +
                                        std::to_string(values.size()) + ")");
  if (times.size() < 2)
    throw Error(Errc::TooFewPoints, "a series needs at least two observations");
  for (std::size_t l = 0; l < times.size(); ++l) {
    if (!std::isfinite(times[l]))
      throw Error(Errc::NonFiniteValue, "non-finite time at index " + std::to_string(l));
    if (!std::isfinite(values[l]))
      throw Error(Errc::NonFiniteValue, "non-finite value at index " + std::to_string(l));
    if (times[l] < 0.0 || times[l] > horizon)
      throw Error(Errc::HorizonViolation,
                  "time " + std::to_string(times[l]) + " at index " + std::to_string(l) +
                      " lies outside [0, " + std::to_string(horizon) + "]");
    if (l > 0 && !(times[l] > times[l - 1]))
      throw Error(Errc::NonMonotoneTimes, "times not strictly increasing at index " + std::to_string(l));
  }

  ObservationSeries s;
  s.times_ = std::move(times);
  s.values_ = std::move(values);
  s.horizon_ = horizon;
  s.positions_.resize(s.times_.size());
  std::transform(s.times_.begin(), s.times_.end(), s.positions_.begin(),
                 [horizon](double t) { return t / horizon; });
  s.mesh_ = compute_mesh_stats(s.times_);
  return s;
}

std::vector<double> ObservationSeries::increments() const {
  std::vector<double> delta(num_increments());
  for (std::size_t l = 0; l < delta.size(); ++l) delta[l] = values_[l + 1] - values_[l];
  return delta;
}

ObservationSeries ObservationSeries::with_values(std::vector<double> values) const {
  return validate(times_, std::move(values), horizon_);
}

double increment_std(const ObservationSeries& series) {
  const auto delta = series.increments();
  if (delta.size() < 2) return 0.0;
  const double mean = compensated_sum(delta) / static_cast<double>(delta.size());
  std::vector<double> sq(delta.size());
  for (std::size_t l = 0; l < delta.size(); ++l) sq[l] = (delta[l] - mean) * (delta[l] - mean);
  return std::sqrt(compensated_sum(sq) / static_cast<double>(delta.size() - 1));
}

void NoiseSpec::validate() const {
  if (std_dev.has_value() == multiplier.has_value())
    throw Error(Errc::InvalidSpec, "noise spec needs exactly one of std_dev or multiplier");
  const double v = std_dev ? *std_dev : *multiplier;
  if (!std::isfinite(v) || v < 0.0)
    throw Error(Errc::InvalidSpec, "noise level must be finite and non-negative");
}

ObservationSeries add_noise(const ObservationSeries& series, const NoiseSpec& noise,
                            std::uint64_t stream) {
  noise.validate();
  const double scale = noise.std_dev ? *noise.std_dev : *noise.multiplier * increment_std(series);
  if (scale == 0.0) return series;

  const NormalStream eta(noise.seed, stream);
  std::vector<double> values(series.values().begin(), series.values().end());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += scale * eta(i);
  return series.with_values(std::move(values));
}

ObservationSeries random_subsample(const ObservationSeries& series, double keep, std::uint64_t seed) {
  if (!(keep > 0.0 && keep <= 1.0)) throw Error(Errc::InvalidSpec, "keep probability must lie in (0, 1]");
  const NormalStream draws(seed, 0x5B5A3D1Eull);
  const auto t = series.times();
  const auto x = series.values();
  std::vector<double> times, values;
  times.reserve(t.size());
  values.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool endpoint = i == 0 || i + 1 == t.size();
    if (endpoint || draws.uniform(i) < keep) {
      times.push_back(t[i]);
      values.push_back(x[i]);
    }
  }
  return ObservationSeries::validate(std::move(times), std::move(values), series.horizon());
}

ObservationSeries time_reversed(const ObservationSeries& series) {
  const double T = series.horizon();
  const auto t = series.times();
  const auto x = series.values();
  std::vector<double> times(t.size()), values(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    times[i] = T - t[t.size() - 1 - i];
    values[i] = x[t.size() - 1 - i];
  }
  return ObservationSeries::validate(std::move(times), std::move(values), T);
}

}  // namespace fmvol
