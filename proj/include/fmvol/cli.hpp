#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fmvol/csv.hpp"
#include "fmvol/error.hpp"
#include "fmvol/fourier.hpp"
#include "fmvol/frequencies.hpp"
#include "fmvol/policies.hpp"
#include "fmvol/second_order.hpp"
#include "fmvol/series.hpp"
#include "fmvol/simulate.hpp"

namespace fmvol::cli {

enum class Command { Simulate, Vol, Cov, Leverage, VolVol, Quarticity };
enum class Mode { Spot, Integrated };
enum class Format { Csv, Json };
enum class Policy { Default, Noisy, Mesh };

Command parse_command(std::string_view name);
Mode parse_mode(std::string_view name);
Format parse_format(std::string_view name);
Policy parse_policy(std::string_view name);
LeverageNorm parse_leverage_norm(std::string_view name);
LeverageSign parse_leverage_sign(std::string_view name);
policy::MeshMExponent parse_mesh_exponent(std::string_view name);

std::string_view to_string(Command command) noexcept;
std::string_view to_string(Mode mode) noexcept;
std::string_view to_string(Format format) noexcept;
std::string_view to_string(Policy policy) noexcept;

/// Everything one invocation needs. Serializes to JSON; feeding the JSON back
/// through config_from_json and run reproduces the result.
struct RunConfig {
  Command command = Command::Vol;
  Mode mode = Mode::Integrated;
  /// CSV paths: 2 for cov, 1 otherwise. Empty means "simulate `heston` in memory".
  std::vector<std::string> inputs;
  std::optional<sim::HestonSpec> heston;
  /// Asset of a simulated path fed to univariate estimators.
  std::size_t asset = 0;
  double horizon = 1.0;
  csv::TimeMapping time_mapping = csv::TimeMapping::Auto;

  Policy policy = Policy::Default;
  std::optional<int> N, M, L;
  bool clamp = true;
  policy::MeshMExponent mesh_m_exponent = policy::MeshMExponent::Positive;
  LeverageNorm leverage_norm = LeverageNorm::Paper;
  LeverageSign leverage_sign = LeverageSign::Consistent;

  std::optional<std::vector<double>> taus;
  std::optional<double> tau_step;

  std::string output;  ///< empty: standard output
  Format format = Format::Csv;
  std::optional<std::uint64_t> seed;

  /// Equal-time blocks for integrated estimates; block values are summed.
  int split = 1;
  /// Observation noise, as a multiple of the increment standard deviation.
  std::optional<double> noise_multiplier;
  /// Variance CSV joined into spot output as a `truth` column.
  std::optional<std::string> truth;
  /// Post-process negative spot variances to zero (vol spot only).
  bool clip_negative = false;

  /// Throws InvalidConfig / InvalidFrequencies on inconsistent settings.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Accepts a RunConfig object or a whole result envelope (its "config" member).
RunConfig config_from_json(const nlohmann::json& j);

struct Diagnostics {
  double max_imag_residual = 0.0;
  std::vector<MeshStats> mesh;
  std::vector<csv::AffineTimeMap> time_maps;
  std::vector<std::size_t> truncations;
  std::vector<double> block_values;
  std::size_t clipped = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> files;
};

struct ResultEnvelope {
  RunConfig config;
  std::optional<CuttingFrequencies> frequencies;
  std::optional<double> value;
  std::optional<SpotPath> spot;
  Diagnostics diagnostics;
};

nlohmann::json to_json(const ResultEnvelope& result);

/// Resolves defaults, runs the pipeline and writes outputs. Results meant for
/// a file go to `stdout_sink` when config.output is empty.
ResultEnvelope run(const RunConfig& config, std::ostream& stdout_sink);

/// Splits [0, T] into `blocks` equal pieces; each piece is re-based to [0, T/blocks]
/// and keeps the last observation at or before its start (moved onto the start).
std::vector<ObservationSeries> split_series(const ObservationSeries& series, int blocks);

int exit_code(ErrorKind kind) noexcept;
nlohmann::json error_json(const Error& error);

/// Full command line front end: parses argv, runs, reports errors. Returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fmvol::cli
