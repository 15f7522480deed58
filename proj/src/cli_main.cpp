#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "fmvol/cli.hpp"
#include "fmvol/json_io.hpp"

namespace fmvol::cli {

namespace {

using nlohmann::json;

// Flag storage shared by every subcommand; only one of them is parsed per call.
struct RawOptions {
  std::vector<std::string> inputs;
  std::string mode = "integrated";
  double horizon = 1.0;
  std::string time_mapping = "auto";
  std::string policy = "default";
  int N = 0, M = 0, L = 0;
  bool no_clamp = false;
  std::string mesh_exponent = "positive";
  std::string leverage_norm = "paper";
  std::string leverage_sign = "consistent";
  std::vector<double> taus;
  double tau_step = 0.0;
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int split = 1;
  double noise = 0.0;
  std::string truth;
  bool clip_negative = false;
  std::string heston_config;
  bool heston1d = false;
  bool heston2d = false;
  int steps = 0;
  std::size_t asset = 0;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot open configuration file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, "cannot parse '" + path + "': " + e.what());
  }
}

sim::HestonSpec univariate_reference() {
  sim::HestonSpec spec;
  spec.assets = {{0.0, 0.4, 2.0, 1.0}};
  spec.rho = {-0.5};
  spec.x0 = {std::log(100.0)};
  spec.v0 = {0.4};
  return spec;
}

struct Bound {
  CLI::App* app;
  Command command;
  CLI::Option* horizon;
  CLI::Option* N;
  CLI::Option* M;
  CLI::Option* L;
  CLI::Option* taus;
  CLI::Option* tau_step;
  CLI::Option* seed;
  CLI::Option* noise;
  CLI::Option* truth;
  CLI::Option* steps;
};

Bound add_subcommand(CLI::App& app, RawOptions& raw, Command command, const std::string& help) {
  auto* sub = app.add_subcommand(std::string(to_string(command)), help);
  Bound b{sub, command, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr};
  const bool estimator = command != Command::Simulate;
  b.horizon = sub->add_option("--T,--horizon", raw.horizon, "Horizon T of the observation window");
  sub->add_option("--out,-o", raw.output, estimator ? "Output file (default: stdout)" : "Output CSV path");
  sub->add_option("--format", raw.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  b.seed = sub->add_option("--seed", raw.seed, "Seed for simulation and noise");
  sub->add_option("--config", raw.heston_config, "Heston spec JSON");
  sub->add_flag("--heston1d", raw.heston1d, "Use the built-in univariate Heston set-up");
  sub->add_flag("--heston2d", raw.heston2d, "Use the built-in bivariate Heston set-up");
  b.steps = sub->add_option("--steps", raw.steps, "Override the number of simulation steps");
  if (!estimator) return b;

  sub->add_option("inputs", raw.inputs, "time,value CSV file(s)");
  sub->add_option("--mode", raw.mode, "spot or integrated")->check(CLI::IsMember({"spot", "integrated"}));
  sub->add_option("--time-mapping", raw.time_mapping, "auto, identity or rescale")
      ->check(CLI::IsMember({"auto", "identity", "rescale"}));
  sub->add_option("--policy", raw.policy, "Frequency policy")->check(CLI::IsMember({"default", "noisy", "mesh"}));
  b.N = sub->add_option("--N", raw.N, "Convolution cutting frequency");
  b.M = sub->add_option("--M", raw.M, "Fejer / second-level cutting frequency");
  b.L = sub->add_option("--L", raw.L, "Second-order Fejer cutting frequency");
  sub->add_flag("--no-clamp", raw.no_clamp, "Return raw policy values without clamping");
  sub->add_option("--mesh-m-exponent", raw.mesh_exponent, "Exponent sign of the mesh preset M")
      ->check(CLI::IsMember({"positive", "printed"}));
  sub->add_option("--leverage-norm", raw.leverage_norm, "Integrated leverage normalization")
      ->check(CLI::IsMember({"paper", "symmetric"}));
  sub->add_option("--leverage-sign", raw.leverage_sign, "Integrated leverage sign convention")
      ->check(CLI::IsMember({"consistent", "printed"}));
  b.taus = sub->add_option("--taus", raw.taus, "Comma separated estimation times")->delimiter(',');
  b.tau_step = sub->add_option("--tau-step", raw.tau_step, "Estimation times 0:step:T");
  sub->add_option("--split", raw.split, "Sum integrated estimates over k equal-time blocks");
  b.noise = sub->add_option("--noise", raw.noise, "Add noise with this multiple of the increment std");
  b.truth = sub->add_option("--truth", raw.truth, "Variance CSV joined into spot output");
  sub->add_flag("--clip-negative", raw.clip_negative, "Clip negative spot variances to zero");
  sub->add_option("--asset", raw.asset, "Asset of a simulated path to estimate");
  return b;
}

RunConfig build_config(const Bound& b, const RawOptions& raw) {
  RunConfig c;
  c.command = b.command;
  if (b.command != Command::Simulate) {
    c.mode = parse_mode(raw.mode);
    c.inputs = raw.inputs;
    c.time_mapping = csv::parse_time_mapping(raw.time_mapping);
    c.policy = parse_policy(raw.policy);
    if (b.N->count()) c.N = raw.N;
    if (b.M->count()) c.M = raw.M;
    if (b.L->count()) c.L = raw.L;
    c.clamp = !raw.no_clamp;
    c.mesh_m_exponent = parse_mesh_exponent(raw.mesh_exponent);
    c.leverage_norm = parse_leverage_norm(raw.leverage_norm);
    c.leverage_sign = parse_leverage_sign(raw.leverage_sign);
    if (b.taus->count()) c.taus = raw.taus;
    if (b.tau_step->count()) c.tau_step = raw.tau_step;
    c.split = raw.split;
    if (b.noise->count()) c.noise_multiplier = raw.noise;
    if (b.truth->count()) c.truth = raw.truth;
    c.clip_negative = raw.clip_negative;
    c.asset = raw.asset;
  }
  c.horizon = raw.horizon;
  c.output = raw.output;
  c.format = parse_format(raw.format);
  if (b.seed->count()) c.seed = raw.seed;

  if (raw.heston1d && raw.heston2d) throw Error(Errc::InvalidConfig, "--heston1d and --heston2d are exclusive");
  if (!raw.heston_config.empty()) {
    c.heston = sim::spec_from_json(read_json_file(raw.heston_config));
    if ((raw.heston1d && c.heston->dimension() != 1) || (raw.heston2d && c.heston->dimension() != 2))
      throw Error(Errc::InvalidSpec, "Heston spec dimension does not match the requested simulator");
  } else if (raw.heston2d) {
    c.heston = sim::HestonSpec::reference_bivariate(0);
  } else if (raw.heston1d) {
    c.heston = univariate_reference();
  }
  if (c.heston) {
    if (b.steps->count()) c.heston->steps = raw.steps;
    if (b.horizon->count()) c.heston->horizon = raw.horizon;
    if (c.seed) c.heston->seed = *c.seed;
    if (c.inputs.empty()) c.horizon = c.heston->horizon;
  }
  return c;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier-Malliavin estimators of spot and integrated volatility, covariance, leverage, "
               "vol-of-vol and quarticity, with a Heston simulator"};
  app.name("fmvol");
  app.require_subcommand(1);
  app.fallthrough();
  bool error_as_json = false;
  app.add_flag("--error-json", error_as_json, "Print errors as JSON on stdout");

  RawOptions raw;
  std::vector<Bound> bound;
  bound.push_back(add_subcommand(app, raw, Command::Simulate, "Simulate Heston paths to CSV"));
  bound.push_back(add_subcommand(app, raw, Command::Vol, "Spot or integrated variance"));
  bound.push_back(add_subcommand(app, raw, Command::Cov, "Spot or integrated covariance of two series"));
  bound.push_back(add_subcommand(app, raw, Command::Leverage, "Spot or integrated leverage"));
  bound.push_back(add_subcommand(app, raw, Command::VolVol, "Spot or integrated volatility of volatility"));
  bound.push_back(add_subcommand(app, raw, Command::Quarticity, "Spot or integrated quarticity"));
  std::string replay_file, replay_output;
  auto* replay = app.add_subcommand("replay", "Re-run a configuration or a result envelope (JSON)");
  replay->add_option("file", replay_file, "RunConfig or envelope JSON")->required();
  auto* replay_out = replay->add_option("--out,-o", replay_output, "Override the output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return 0;
    if (error_as_json)
      out << json{{"error", {{"code", "InvalidConfig"}, {"kind", "config"}, {"message", e.what()}}}, {"exit_code", 2}}
                 .dump()
          << '\n';
    return 2;
  }

  try {
    RunConfig config;
    if (replay->parsed()) {
      config = config_from_json(read_json_file(replay_file));
      if (replay_out->count()) config.output = replay_output;
    } else {
      const auto it = std::find_if(bound.begin(), bound.end(), [](const Bound& b) { return b.app->parsed(); });
      config = build_config(*it, raw);
    }
    run(config, out);
    return 0;
  } catch (const Error& e) {
    err << "fmvol: " << to_string(e.code()) << ": " << e.what() << '\n';
    if (error_as_json) out << error_json(e).dump() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    const Error wrapped(Errc::NumericalFailure, e.what());
    err << "fmvol: " << e.what() << '\n';
    if (error_as_json) out << error_json(wrapped).dump() << '\n';
    return 4;
  }
}

}  // namespace fmvol::cli
