#include "fmvol/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fmvol/estimators.hpp"
#include "fmvol/json_io.hpp"

namespace fmvol::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& message) { throw Error(Errc::InvalidConfig, message); }

template <class E, std::size_t K>
E lookup(std::string_view name, const std::array<std::pair<std::string_view, E>, K>& table, const char* what) {
  for (const auto& [key, value] : table)
    if (key == name) return value;
  bad_config(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

template <class E, std::size_t K>
std::string_view name_of(E value, const std::array<std::pair<std::string_view, E>, K>& table) noexcept {
  for (const auto& [key, v] : table)
    if (v == value) return key;
  return "?";
}

constexpr std::array<std::pair<std::string_view, Command>, 6> kCommands{{{"simulate", Command::Simulate},
                                                                          {"vol", Command::Vol},
                                                                          {"cov", Command::Cov},
                                                                          {"leverage", Command::Leverage},
                                                                          {"volvol", Command::VolVol},
                                                                          {"quarticity", Command::Quarticity}}};
constexpr std::array<std::pair<std::string_view, Mode>, 2> kModes{{{"spot", Mode::Spot}, {"integrated", Mode::Integrated}}};
constexpr std::array<std::pair<std::string_view, Format>, 2> kFormats{{{"csv", Format::Csv}, {"json", Format::Json}}};
constexpr std::array<std::pair<std::string_view, Policy>, 3> kPolicies{
    {{"default", Policy::Default}, {"noisy", Policy::Noisy}, {"mesh", Policy::Mesh}}};
constexpr std::array<std::pair<std::string_view, LeverageNorm>, 2> kNorms{
    {{"paper", LeverageNorm::Paper}, {"symmetric", LeverageNorm::Symmetric}}};
constexpr std::array<std::pair<std::string_view, LeverageSign>, 2> kSigns{
    {{"consistent", LeverageSign::Consistent}, {"printed", LeverageSign::Printed}}};
constexpr std::array<std::pair<std::string_view, policy::MeshMExponent>, 2> kExponents{
    {{"positive", policy::MeshMExponent::Positive}, {"printed", policy::MeshMExponent::Printed}}};

std::ofstream open_file(const std::string& path) {
  std::ofstream out(path);
  if (!out) bad_config("cannot open output file '" + path + "'");
  return out;
}

json time_map_json(const csv::AffineTimeMap& m) {
  return {{"offset", m.offset}, {"scale", m.scale}, {"rescaled", m.rescaled}, {"iso8601", m.iso8601}};
}

std::vector<double> step_taus(double horizon, double step) {
  std::vector<double> taus;
  const auto count = static_cast<std::size_t>(std::floor(horizon / step * (1.0 + 1e-12)));
  for (std::size_t i = 0; i <= count; ++i) taus.push_back(std::min(static_cast<double>(i) * step, horizon));
  return taus;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw Error(Errc::NumericalFailure, std::string("non-finite ") + what);
}

policy::Kind default_kind(Command command) {
  switch (command) {
    case Command::Cov: return policy::Kind::DefaultCov;
    case Command::Leverage: return policy::Kind::DefaultLeverage;
    case Command::VolVol: return policy::Kind::DefaultVolVol;
    case Command::Quarticity: return policy::Kind::DefaultQuarticity;
    default: return policy::Kind::DefaultVol;
  }
}

policy::Choice resolve_frequencies(const RunConfig& config, const std::vector<ObservationSeries>& series) {
  policy::Choice choice;
  if (config.N && config.M && config.L) {
    choice.freqs = {*config.N, *config.M, *config.L};
  } else {
    const policy::Options options{config.clamp, config.mesh_m_exponent};
    std::size_t n = series[0].num_increments();
    for (const auto& s : series) n = std::min(n, s.num_increments());
    switch (config.policy) {
      case Policy::Default:
        choice = series.size() == 2
                     ? policy::defaults_cov(series[0].num_increments(), series[1].num_increments(), options)
                     : policy::defaults(default_kind(config.command), n, options);
        break;
      case Policy::Noisy: choice = policy::noisy_preset(n, options); break;
      case Policy::Mesh: choice = policy::mesh_preset(series[0], series.back(), options); break;
    }
    if (config.N) choice.freqs.N = *config.N;
    if (config.M) choice.freqs.M = *config.M;
    if (config.L) choice.freqs.L = *config.L;
  }
  choice.freqs.validate();
  return choice;
}

struct Outcome {
  CuttingFrequencies freqs;
  std::optional<double> value;
  std::optional<SpotPath> spot;
  double imag = 0.0;
  std::vector<std::string> warnings;
};

Outcome estimate(const RunConfig& config, const std::vector<ObservationSeries>& series) {
  auto choice = resolve_frequencies(config, series);
  Outcome out;
  out.freqs = choice.freqs;
  out.warnings = std::move(choice.warnings);
  const auto& f = out.freqs;
  const auto& s = series[0];

  if (config.mode == Mode::Integrated) {
    Estimate e;
    switch (config.command) {
      case Command::Vol: e = integrated_vol(s, f.N); break;
      case Command::Cov: e = integrated_cov(s, series[1], f.N); break;
      case Command::Leverage: e = integrated_leverage(s, f, config.leverage_norm, config.leverage_sign); break;
      case Command::VolVol: e = integrated_volvol(s, f); break;
      case Command::Quarticity: e = integrated_quarticity(s, f); break;
      case Command::Simulate: break;
    }
    out.value = e.value;
    out.imag = e.imag_residual;
    out.warnings.insert(out.warnings.end(), e.warnings.begin(), e.warnings.end());
    return out;
  }

  std::optional<std::vector<double>> taus = config.taus;
  if (config.tau_step) taus = step_taus(s.horizon(), *config.tau_step);
  SpotPath path;
  switch (config.command) {
    case Command::Vol: path = spot_vol(s, f, taus); break;
    case Command::Cov: path = spot_cov(s, series[1], f, taus); break;
    case Command::Leverage: path = spot_leverage(s, f, taus); break;
    case Command::VolVol: path = spot_volvol(s, f, taus); break;
    case Command::Quarticity: path = spot_quarticity(s, f, taus); break;
    case Command::Simulate: break;
  }
  out.imag = path.max_imag_residual;
  out.warnings.insert(out.warnings.end(), path.warnings.begin(), path.warnings.end());
  out.spot = std::move(path);
  return out;
}

void write_simulation(const sim::SimulatedPath& path, const std::string& output, Diagnostics& diag) {
  const std::filesystem::path target(output);
  const std::size_t d = path.x.size();
  {
    auto out = open_file(output);
    out << "time";
    for (std::size_t a = 1; a <= d; ++a) out << ",x" << a << ",v" << a;
    out << '\n';
    for (std::size_t l = 0; l < path.times.size(); ++l) {
      out << csv::format_double(path.times[l]);
      for (std::size_t a = 0; a < d; ++a)
        out << ',' << csv::format_double(path.x[a][l]) << ',' << csv::format_double(path.v[a][l]);
      out << '\n';
    }
  }
  diag.files.push_back(output);
  for (std::size_t a = 0; a < d; ++a) {
    for (const char kind : {'x', 'v'}) {
      const auto name = target.stem().string() + "_" + kind + std::to_string(a + 1) + target.extension().string();
      const auto file = (target.parent_path() / name).string();
      csv::write_series(file, kind == 'x' ? path.series(a) : path.variance_series(a));
      diag.files.push_back(file);
    }
  }
}

}  // namespace

Command parse_command(std::string_view name) { return lookup(name, kCommands, "command"); }
Mode parse_mode(std::string_view name) { return lookup(name, kModes, "mode"); }
Format parse_format(std::string_view name) { return lookup(name, kFormats, "format"); }
Policy parse_policy(std::string_view name) { return lookup(name, kPolicies, "policy"); }
LeverageNorm parse_leverage_norm(std::string_view name) { return lookup(name, kNorms, "leverage norm"); }
LeverageSign parse_leverage_sign(std::string_view name) { return lookup(name, kSigns, "leverage sign"); }
policy::MeshMExponent parse_mesh_exponent(std::string_view name) { return lookup(name, kExponents, "mesh exponent"); }

std::string_view to_string(Command command) noexcept { return name_of(command, kCommands); }
std::string_view to_string(Mode mode) noexcept { return name_of(mode, kModes); }
std::string_view to_string(Format format) noexcept { return name_of(format, kFormats); }
std::string_view to_string(Policy policy) noexcept { return name_of(policy, kPolicies); }

void RunConfig::validate() const {
  if (!(std::isfinite(horizon) && horizon > 0.0)) bad_config("horizon must be positive");
  if (command == Command::Simulate) {
    if (!heston) bad_config("simulate needs a Heston spec (--config, --heston1d or --heston2d)");
    if (output.empty()) bad_config("simulate needs an output path");
    heston->validate();
    return;
  }
  const std::size_t want = command == Command::Cov ? 2 : 1;
  if (inputs.empty()) {
    if (!heston) bad_config("no input series and no Heston spec");
    heston->validate();
    if (command == Command::Cov && heston->dimension() != 2) bad_config("cov on a simulated path needs two assets");
    if (asset >= heston->dimension()) bad_config("asset index out of range");
  } else if (inputs.size() != want) {
    bad_config(std::string(to_string(command)) + " takes exactly " + std::to_string(want) + " input file(s)");
  }
  for (const auto* f : {&N, &M, &L})
    if (*f && **f < 1) throw Error(Errc::InvalidFrequencies, "cutting frequencies must be >= 1");
  if ((N && M && *N < *M) || (M && L && *M < *L) || (N && L && *N < *L))
    throw Error(Errc::InvalidFrequencies, "explicit frequencies must satisfy N >= M >= L");
  if (taus && tau_step) bad_config("give either explicit taus or a tau step, not both");
  if (taus && taus->empty()) throw Error(Errc::EmptyTaus, "explicit tau list is empty");
  if (tau_step && !(*tau_step > 0.0)) bad_config("tau step must be positive");
  if (split < 1) bad_config("split must be >= 1");
  if (split > 1 && mode != Mode::Integrated) bad_config("split applies to integrated estimates only");
  if (noise_multiplier && !(*noise_multiplier >= 0.0)) bad_config("noise multiplier must be non-negative");
  if (clip_negative && !(command == Command::Vol && mode == Mode::Spot))
    bad_config("clip-negative applies to spot vol only");
  if (truth && mode != Mode::Spot) bad_config("a truth series only applies to spot output");
}

json to_json(const RunConfig& c) {
  auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
  return {{"command", to_string(c.command)},
          {"mode", to_string(c.mode)},
          {"inputs", c.inputs},
          {"heston", c.heston ? sim::to_json(*c.heston) : json(nullptr)},
          {"asset", c.asset},
          {"T", c.horizon},
          {"time_mapping", csv::to_string(c.time_mapping)},
          {"policy", to_string(c.policy)},
          {"N", opt(c.N)},
          {"M", opt(c.M)},
          {"L", opt(c.L)},
          {"clamp", c.clamp},
          {"mesh_m_exponent", name_of(c.mesh_m_exponent, kExponents)},
          {"leverage_norm", name_of(c.leverage_norm, kNorms)},
          {"leverage_sign", name_of(c.leverage_sign, kSigns)},
          {"taus", opt(c.taus)},
          {"tau_step", opt(c.tau_step)},
          {"output", c.output},
          {"format", to_string(c.format)},
          {"seed", opt(c.seed)},
          {"split", c.split},
          {"noise_multiplier", opt(c.noise_multiplier)},
          {"truth", opt(c.truth)},
          {"clip_negative", c.clip_negative}};
}

RunConfig config_from_json(const json& input) {
  const json& j = input.contains("config") ? input.at("config") : input;
  try {
    RunConfig c;
    c.command = parse_command(j.at("command").get<std::string>());
    c.mode = parse_mode(j.value("mode", "integrated"));
    c.inputs = j.value("inputs", std::vector<std::string>{});
    if (j.contains("heston") && !j.at("heston").is_null()) c.heston = sim::spec_from_json(j.at("heston"));
    c.asset = j.value("asset", std::size_t{0});
    c.horizon = j.value("T", 1.0);
    c.time_mapping = csv::parse_time_mapping(j.value("time_mapping", "auto"));
    c.policy = parse_policy(j.value("policy", "default"));
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<typename std::decay_t<decltype(field)>::value_type>();
    };
    get("N", c.N);
    get("M", c.M);
    get("L", c.L);
    c.clamp = j.value("clamp", true);
    c.mesh_m_exponent = parse_mesh_exponent(j.value("mesh_m_exponent", "positive"));
    c.leverage_norm = parse_leverage_norm(j.value("leverage_norm", "paper"));
    c.leverage_sign = parse_leverage_sign(j.value("leverage_sign", "consistent"));
    get("taus", c.taus);
    get("tau_step", c.tau_step);
    c.output = j.value("output", "");
    c.format = parse_format(j.value("format", "csv"));
    get("seed", c.seed);
    c.split = j.value("split", 1);
    get("noise_multiplier", c.noise_multiplier);
    get("truth", c.truth);
    c.clip_negative = j.value("clip_negative", false);
    return c;
  } catch (const json::exception& e) {
    bad_config(std::string("bad run configuration JSON: ") + e.what());
  }
}

json to_json(const ResultEnvelope& r) {
  const auto& d = r.diagnostics;
  json mesh = json::array();
  for (const auto& m : d.mesh) mesh.push_back(to_json(m));
  json maps = json::array();
  for (const auto& m : d.time_maps) maps.push_back(time_map_json(m));
  return {{"config", to_json(r.config)},
          {"frequencies", r.frequencies ? to_json(*r.frequencies) : json(nullptr)},
          {"value", r.value ? json(*r.value) : json(nullptr)},
          {"spot", r.spot ? to_json(*r.spot) : json(nullptr)},
          {"diagnostics",
           {{"max_imag_residual", d.max_imag_residual},
            {"mesh", std::move(mesh)},
            {"time_maps", std::move(maps)},
            {"truncations", d.truncations},
            {"block_values", d.block_values},
            {"clipped", d.clipped},
            {"wall_seconds", d.wall_seconds},
            {"warnings", d.warnings},
            {"files", d.files}}}};
}

std::vector<ObservationSeries> split_series(const ObservationSeries& series, int blocks) {
  if (blocks < 1) bad_config("split must be >= 1");
  if (blocks == 1) return {series};
  const auto t = series.times();
  const auto x = series.values();
  const double T = series.horizon();
  const double width = T / blocks;
  std::vector<ObservationSeries> out;
  for (int b = 0; b < blocks; ++b) {
    const double start = T * b / blocks;
    const double end = b + 1 == blocks ? T : T * (b + 1) / blocks;
    // last observation at or before start, then everything up to end
    auto first = std::upper_bound(t.begin(), t.end(), start);
    if (first != t.begin()) --first;
    const auto last = std::upper_bound(t.begin(), t.end(), end);
    std::vector<double> times, values;
    for (auto it = first; it != last; ++it) {
      const auto i = static_cast<std::size_t>(it - t.begin());
      times.push_back(std::clamp(t[i] - start, 0.0, width));
      values.push_back(x[i]);
    }
    if (times.size() < 2)
      throw Error(Errc::TooFewPoints, "split block " + std::to_string(b) + " holds fewer than two observations");
    out.push_back(ObservationSeries::validate(std::move(times), std::move(values), width));
  }
  return out;
}

ResultEnvelope run(const RunConfig& config, std::ostream& stdout_sink) {
  const auto started = std::chrono::steady_clock::now();
  config.validate();
  ResultEnvelope result;
  result.config = config;
  auto& diag = result.diagnostics;

  std::optional<sim::HestonSpec> spec = config.heston;
  if (spec && config.seed) spec->seed = *config.seed;

  if (config.command == Command::Simulate) {
    const auto path = sim::simulate(*spec);
    diag.truncations = path.truncations;
    for (std::size_t a = 0; a < path.x.size(); ++a) diag.mesh.push_back(compute_mesh_stats(path.times));
    write_simulation(path, config.output, diag);
    diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (config.format == Format::Json) stdout_sink << to_json(result).dump(2) << '\n';
    return result;
  }

  std::vector<ObservationSeries> series;
  std::optional<ObservationSeries> truth;
  if (config.inputs.empty()) {
    const auto path = sim::simulate(*spec);
    diag.truncations = path.truncations;
    if (config.command == Command::Cov) {
      series = {path.series(0), path.series(1)};
    } else {
      series = {path.series(config.asset)};
      if (config.command == Command::Vol && config.mode == Mode::Spot) truth = path.variance_series(config.asset);
    }
  } else {
    for (const auto& input : config.inputs) {
      auto loaded = csv::read_series(input, config.horizon, config.time_mapping);
      diag.time_maps.push_back(loaded.mapping);
      series.push_back(std::move(loaded.series));
    }
  }
  if (config.noise_multiplier) {
    for (std::size_t i = 0; i < series.size(); ++i)
      series[i] = add_noise(series[i], NoiseSpec::relative(*config.noise_multiplier, config.seed.value_or(0)), i);
  }
  if (config.truth) truth = csv::read_series(*config.truth, series[0].horizon(), config.time_mapping).series;
  for (const auto& s : series) diag.mesh.push_back(s.mesh());

  if (config.split > 1) {
    std::vector<std::vector<ObservationSeries>> pieces;
    for (const auto& s : series) pieces.push_back(split_series(s, config.split));
    double total = 0.0;
    for (int b = 0; b < config.split; ++b) {
      std::vector<ObservationSeries> block;
      for (const auto& p : pieces) block.push_back(p[static_cast<std::size_t>(b)]);
      const auto outcome = estimate(config, block);
      if (b == 0) result.frequencies = outcome.freqs;
      total += *outcome.value;
      diag.block_values.push_back(*outcome.value);
      diag.max_imag_residual = std::max(diag.max_imag_residual, outcome.imag);
      for (const auto& w : outcome.warnings) diag.warnings.push_back("block " + std::to_string(b) + ": " + w);
    }
    result.value = total;
  } else {
    auto outcome = estimate(config, series);
    result.frequencies = outcome.freqs;
    result.value = outcome.value;
    result.spot = std::move(outcome.spot);
    diag.max_imag_residual = outcome.imag;
    diag.warnings = std::move(outcome.warnings);
  }

  if (result.spot && config.clip_negative) diag.clipped = clip_negative_variance(*result.spot);
  if (result.value) require_finite(*result.value, "estimate");
  if (result.spot)
    for (const double v : result.spot->values) require_finite(v, "spot value");
  require_finite(diag.max_imag_residual, "imaginary residual");

  std::ofstream file;
  if (!config.output.empty()) {
    file = open_file(config.output);
    diag.files.push_back(config.output);
  }
  std::ostream& sink = config.output.empty() ? stdout_sink : file;
  diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (config.format == Format::Json) {
    sink << to_json(result).dump(2) << '\n';
  } else if (result.spot) {
    csv::emit_plot_data(*result.spot, sink, truth ? &*truth : nullptr);
  } else {
    sink << "quantity,value\n" << to_string(config.command) << ',' << csv::format_double(*result.value) << '\n';
  }
  return result;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Data: return 3;
    case ErrorKind::Numeric: return 4;
  }
  return 4;
}

json error_json(const Error& error) {
  static constexpr std::array<std::string_view, 3> kinds{"config", "data", "numeric"};
  return {{"error",
           {{"code", to_string(error.code())},
            {"kind", kinds[static_cast<std::size_t>(error.kind())]},
            {"message", error.what()}}},
          {"exit_code", exit_code(error.kind())}};
}

}  // namespace fmvol::cli
