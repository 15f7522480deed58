#include "fmvol/json_io.hpp"

#include "fmvol/error.hpp"

namespace fmvol {

using nlohmann::json;

json to_json(const CoefficientVector& coeffs) {
  json pairs = json::array();
  for (const auto& c : coeffs.materialize()) pairs.push_back({c.real(), c.imag()});
  return {{"T", coeffs.horizon()},
          {"k_min", -coeffs.max_index()},
          {"k_max", coeffs.max_index()},
          {"hermitian", coeffs.hermitian()},
          {"coeffs", std::move(pairs)}};
}

CoefficientVector coefficients_from_json(const json& j) {
  try {
    const double T = j.at("T").get<double>();
    const int K = j.at("k_max").get<int>();
    const auto& pairs = j.at("coeffs");
    if (j.at("k_min").get<int>() != -K || pairs.size() != 2 * static_cast<std::size_t>(K) + 1)
      throw Error(Errc::ParseError, "coefficient JSON must cover k = -K..K");
    std::vector<Complex> full;
    full.reserve(pairs.size());
    for (const auto& p : pairs) full.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    if (!j.value("hermitian", false)) return CoefficientVector::from_full(T, std::move(full));
    return CoefficientVector::from_nonnegative(
        T, std::vector<Complex>(full.begin() + K, full.end()));
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad coefficient JSON: ") + e.what());
  }
}

json to_json(const SpotPath& path) {
  return {{"tau", path.taus},
          {"estimate", path.values},
          {"max_imag_residual", path.max_imag_residual},
          {"warnings", path.warnings}};
}

json to_json(const MeshStats& mesh) {
  return {{"max_gap", mesh.max_gap},
          {"min_gap", mesh.min_gap},
          {"mean_gap", mesh.mean_gap},
          {"is_equispaced", mesh.is_equispaced}};
}

json to_json(const CuttingFrequencies& freqs) { return {{"N", freqs.N}, {"M", freqs.M}, {"L", freqs.L}}; }

namespace sim {

json to_json(const HestonSpec& spec) {
  json params = json::array();
  auto row = [&](auto field) {
    json r = json::array();
    for (const auto& a : spec.assets) r.push_back(a.*field);
    params.push_back(std::move(r));
  };
  row(&HestonParams::mu);
  row(&HestonParams::alpha);
  row(&HestonParams::theta);
  row(&HestonParams::gamma);
  json j = {{"T", spec.horizon}, {"n", spec.steps}, {"parameters", std::move(params)},
            {"x0", spec.x0},     {"V0", spec.v0},    {"seed", spec.seed}};
  if (spec.dimension() == 1 && spec.rho.size() == 1)
    j["rho"] = spec.rho[0];
  else
    j["Rho"] = spec.rho;
  return j;
}

HestonSpec spec_from_json(const json& j) {
  try {
    HestonSpec spec;
    spec.horizon = j.value("T", 1.0);
    spec.steps = j.value("n", 23400);
    spec.seed = j.value("seed", std::uint64_t{0});
    const auto& params = j.at("parameters");
    // accept a flat [mu, alpha, theta, gamma] for a single asset
    if (params.size() == 4 && params[0].is_number()) {
      spec.assets = {{params[0].get<double>(), params[1].get<double>(), params[2].get<double>(),
                      params[3].get<double>()}};
    } else {
      if (params.size() != 4) throw Error(Errc::InvalidSpec, "parameters must have 4 rows (mu, alpha, theta, gamma)");
      const std::size_t d = params[0].size();
      for (std::size_t a = 0; a < d; ++a)
        spec.assets.push_back({params[0].at(a).get<double>(), params[1].at(a).get<double>(),
                               params[2].at(a).get<double>(), params[3].at(a).get<double>()});
    }
    if (j.contains("Rho"))
      spec.rho = j.at("Rho").get<std::vector<double>>();
    else if (j.contains("rho"))
      spec.rho = j.at("rho").is_array() ? j.at("rho").get<std::vector<double>>()
                                        : std::vector<double>{j.at("rho").get<double>()};
    auto vec = [&](const char* key) {
      const auto& v = j.at(key);
      return v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
    };
    spec.x0 = vec("x0");
    spec.v0 = vec("V0");
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("bad Heston spec JSON: ") + e.what());
  }
}

}  // namespace sim

}  // namespace fmvol
