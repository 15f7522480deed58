#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmvol/fourier.hpp"
#include "fmvol/series.hpp"

namespace fmvol::csv {

/// How raw time stamps are placed on [0, T].
enum class TimeMapping {
  Auto,      ///< keep numeric times already inside [0, T], rescale anything else
  Identity,  ///< use times as given
  Rescale,   ///< map [t_first, t_last] affinely onto [0, T]
};

TimeMapping parse_time_mapping(std::string_view name);
std::string_view to_string(TimeMapping mapping) noexcept;

/// t_mapped = (t_raw - offset) * scale.
struct AffineTimeMap {
  double offset = 0.0;
  double scale = 1.0;
  bool rescaled = false;
  bool iso8601 = false;
};

struct LoadedSeries {
  ObservationSeries series;
  AffineTimeMap mapping;
};

/// Two columns `time,value`, optional header, `.` decimal separator. Times are
/// real numbers or ISO-8601 stamps (YYYY-MM-DD[T ]hh:mm:ss[.fff][Z|+hh:mm]);
/// ISO stamps are always rescaled.
LoadedSeries parse_series(std::istream& in, double horizon, TimeMapping mapping = TimeMapping::Auto);
LoadedSeries read_series(const std::string& path, double horizon, TimeMapping mapping = TimeMapping::Auto);

/// Seconds since 1970-01-01T00:00:00Z, or nullopt if `text` is not an ISO-8601 stamp.
std::optional<double> parse_iso8601(std::string_view text);

/// Shortest text that round-trips: 17 significant digits.
std::string format_double(double value);

void write_series(std::ostream& out, const ObservationSeries& series);
void write_series(const std::string& path, const ObservationSeries& series);

/// Nearest truth value for every tau; a match must lie within half the
/// largest gap of the truth grid, otherwise JoinMismatch.
std::vector<double> join_truth(std::span<const double> taus, const ObservationSeries& truth);

/// `tau,estimate[,truth]` rows. Empty paths are rejected with EmptyTaus.
void emit_plot_data(const SpotPath& path, std::ostream& out, const ObservationSeries* truth = nullptr);
void emit_plot_data(const SpotPath& path, const std::string& out_path, const ObservationSeries* truth = nullptr);

}  // namespace fmvol::csv
